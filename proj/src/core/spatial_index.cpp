#include "terrafuse/core/spatial_index.hpp"

#include <algorithm>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

SpatialIndex::SpatialIndex(const PointCloud& cloud) : SpatialIndex(cloud.positions) {}

void SpatialIndex::check_nonempty() const {
  if (tree3_.size() == 0) throw Error(ErrorKind::EmptyCloud, "cannot index an empty cloud");
}

namespace {

IdSet to_sorted_ids(std::vector<std::uint32_t>& raw, std::optional<Index> exclude) {
  std::sort(raw.begin(), raw.end());
  IdSet out;
  out.reserve(raw.size());
  for (auto v : raw) {
    if (exclude && v == *exclude) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace

IdSet SpatialIndex::radius_neighbors(const Eigen::Vector3d& query, double r, Dims dims) const {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  std::vector<std::uint32_t> raw;
  if (dims == Dims::Three) {
    tree3_.radius_search(query, r, raw);
  } else {
    tree2_.radius_search(query.head<2>(), r, raw);
  }
  return to_sorted_ids(raw, std::nullopt);
}

IdSet SpatialIndex::radius_neighbors(Index id, double r, Dims dims) const {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  std::vector<std::uint32_t> raw;
  const Eigen::Vector3d q = position(id);
  if (dims == Dims::Three) {
    tree3_.radius_search(q, r, raw);
  } else {
    tree2_.radius_search(q.head<2>(), r, raw);
  }
  return to_sorted_ids(raw, id);
}

std::size_t SpatialIndex::count_neighbors(Index id, double r, Dims dims) const {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const Eigen::Vector3d q = position(id);
  const std::size_t c = dims == Dims::Three ? tree3_.radius_count(q, r) : tree2_.radius_count(q.head<2>(), r);
  return c - 1;  // the point itself is always within r
}

std::pair<Index, double> SpatialIndex::nearest(const Eigen::Vector3d& query, Dims dims) const {
  const auto [id, d2] = dims == Dims::Three ? tree3_.nearest(query) : tree2_.nearest(query.head<2>());
  return {id, std::sqrt(d2)};
}

}  // namespace terrafuse
