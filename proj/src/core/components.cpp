#include "terrafuse/core/components.hpp"

#include <numeric>

#include "terrafuse/core/error.hpp"
#include "terrafuse/core/kd_tree.hpp"

namespace terrafuse {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // root is the smallest member position
  }
};

}  // namespace

ComponentResult connected_components(const PointCloud& cloud, const IdSet& members, double link_dist,
                                     std::size_t min_size) {
  if (!(link_dist > 0)) throw Error(ErrorKind::InvalidArgument, "link distance must be positive");
  if (min_size < 1) throw Error(ErrorKind::InvalidArgument, "min_size must be at least 1");
  ComponentResult result;
  if (members.empty()) return result;

  Eigen::Matrix3Xd pts(3, static_cast<Eigen::Index>(members.size()));
  for (std::size_t k = 0; k < members.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = cloud.position(members[k]);
  const KdTree<double, 3> tree(pts);

  DisjointSets sets(members.size());
  std::vector<std::uint32_t> hits;
  for (std::size_t k = 0; k < members.size(); ++k) {
    hits.clear();
    tree.radius_search(pts.col(static_cast<Eigen::Index>(k)), link_dist, hits);
    for (auto h : hits) {
      if (h > k) sets.unite(k, h);
    }
  }

  // members is sorted, so numbering roots in member order numbers components
  // by their smallest point id.
  std::vector<std::size_t> root_to_component(members.size(), SIZE_MAX);
  result.component.resize(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t root = sets.find(k);
    if (root_to_component[root] == SIZE_MAX) {
      root_to_component[root] = result.component_sizes.size();
      result.component_sizes.push_back(0);
    }
    result.component[k] = root_to_component[root];
    result.component_sizes[result.component[k]] += 1;
  }
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (result.component_sizes[result.component[k]] >= min_size) result.surviving.push_back(members[k]);
  }
  return result;
}

}  // namespace terrafuse
