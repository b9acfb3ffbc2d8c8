#include "terrafuse/segment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

#include "terrafuse/core/components.hpp"
#include "terrafuse/core/error.hpp"
#include "terrafuse/core/spatial_index.hpp"

namespace terrafuse {

void GroundParams::validate() const {
  if (!(grid_cell > 0) || !(height_tol > 0) || !(slope_tol > 0)) {
    throw Error(ErrorKind::ConfigError, "ground parameters must be positive");
  }
}

void SmoothParams::validate() const {
  if (!(radius > 0) || !(clean_radius > 0)) throw Error(ErrorKind::ConfigError, "smoothing radii must be positive");
  if (iterations < 1) throw Error(ErrorKind::ConfigError, "smoothing needs at least one iteration");
  if (color_tol < 0) throw Error(ErrorKind::ConfigError, "color_tol must be non-negative");
}

namespace {

using Cell = std::pair<std::int64_t, std::int64_t>;

struct Seed {
  Eigen::Vector3d xyz;
  bool accepted = false;
};

}  // namespace

IdSet extract_ground(const PointCloud& cloud, const GroundParams& params) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "ground extraction on empty cloud");
  params.validate();
  const Eigen::Vector2d lo = cloud.positions.topRows<2>().rowwise().minCoeff();
  auto cell_of = [&](const Eigen::Vector3d& p) -> Cell {
    return {static_cast<std::int64_t>(std::floor((p.x() - lo.x()) / params.grid_cell)),
            static_cast<std::int64_t>(std::floor((p.y() - lo.y()) / params.grid_cell))};
  };

  std::map<Cell, Seed> seeds;
  for (Index i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d p = cloud.position(i);
    auto [it, inserted] = seeds.try_emplace(cell_of(p), Seed{p});
    if (!inserted && p.z() < it->second.xyz.z()) it->second.xyz = p;
  }

  // Grow accepted seeds from the lowest one.
  auto lowest = std::min_element(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.xyz.z(), a.first) < std::tie(b.second.xyz.z(), b.first);
  });
  std::deque<Cell> queue{lowest->first};
  lowest->second.accepted = true;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    const Eigen::Vector3d from = seeds.at(c).xyz;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = seeds.find({c.first + dx, c.second + dy});
        if (it == seeds.end() || it->second.accepted) continue;
        const Eigen::Vector3d& to = it->second.xyz;
        const double run = std::max((to - from).head<2>().norm(), 1e-9);
        if (std::abs(to.z() - from.z()) <= params.slope_tol * run) {
          it->second.accepted = true;
          queue.push_back(it->first);
        }
      }
    }
  }

  // Surface height at a point: inverse-distance weighting of accepted seeds in
  // the surrounding cells, widening the ring until some seed is found.
  std::vector<Eigen::Vector3d> accepted;
  for (const auto& [cell, s] : seeds) {
    if (s.accepted) accepted.push_back(s.xyz);
  }
  Eigen::Matrix3Xd accepted_pts(3, static_cast<Eigen::Index>(accepted.size()));
  for (std::size_t k = 0; k < accepted.size(); ++k) accepted_pts.col(static_cast<Eigen::Index>(k)) = accepted[k];
  const SpatialIndex seed_index(accepted_pts);

  IdSet ground;
  for (Index i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d p = cloud.position(i);
    double radius = 1.5 * params.grid_cell;
    IdSet near = seed_index.radius_neighbors(p, radius, Dims::Two);
    while (near.empty()) {
      radius *= 2;
      near = seed_index.radius_neighbors(p, radius, Dims::Two);
    }
    double wsum = 0, zsum = 0;
    for (Index k : near) {
      const Eigen::Vector3d& s = accepted[k];
      const double d = (s - p).head<2>().norm();
      if (d < 1e-9) {
        wsum = 1;
        zsum = s.z();
        break;
      }
      const double w = 1.0 / (d * d);
      wsum += w;
      zsum += w * s.z();
    }
    const double height = p.z() - zsum / wsum;
    if (height <= params.height_tol) ground.push_back(i);
  }
  return ground;
}

GroundCleanup ground_postprocess(const PointCloud& cloud, const IdSet& ground_ids, double link, std::size_t min_comp) {
  if (!ground_ids.empty() && ground_ids.back() >= cloud.size()) {
    throw Error(ErrorKind::InvalidArgument, "ground id outside cloud");
  }
  GroundCleanup out;
  const auto cc = connected_components(cloud, ground_ids, link, min_comp);
  out.kept = cc.surviving;
  std::set_difference(ground_ids.begin(), ground_ids.end(), out.kept.begin(), out.kept.end(),
                      std::back_inserter(out.dropped));
  return out;
}

namespace {

bool smoothable(ClassLabel l) { return l == ClassLabel::Building || l == ClassLabel::Tree; }

}  // namespace

SmoothingResult smooth_labels(const PointCloud& cloud, const std::vector<ClassLabel>& labels,
                              const SmoothParams& params) {
  params.validate();
  if (labels.size() != cloud.size()) throw Error(ErrorKind::LengthMismatch, "one label per point required");
  SmoothingResult result{labels, {}};
  IdSet members;
  for (Index i = 0; i < labels.size(); ++i) {
    if (smoothable(labels[i])) members.push_back(i);
  }
  if (members.empty()) {
    result.changes.assign(params.iterations, 0);
    return result;
  }
  const PointCloud sub = cloud.subset(members);
  const SpatialIndex index(sub);
  std::vector<IdSet> neighbours(members.size());
  for (Index k = 0; k < members.size(); ++k) neighbours[k] = index.radius_neighbors(k, params.radius, Dims::Three);

  std::size_t budget = members.size();
  for (std::size_t it = 0; it < params.iterations; ++it) {
    struct Proposal {
      std::size_t margin;
      Index member;
      ClassLabel label;
    };
    std::vector<Proposal> proposals;
    for (Index k = 0; k < members.size(); ++k) {
      std::size_t building = 0, tree = 0;
      for (Index n : neighbours[k]) {
        (result.labels[members[n]] == ClassLabel::Building ? building : tree) += 1;
      }
      if (building == tree) continue;
      const ClassLabel majority = building > tree ? ClassLabel::Building : ClassLabel::Tree;
      if (majority != result.labels[members[k]]) {
        proposals.push_back({building > tree ? building - tree : tree - building, k, majority});
      }
    }
    std::stable_sort(proposals.begin(), proposals.end(),
                     [](const Proposal& a, const Proposal& b) { return a.margin > b.margin; });
    if (proposals.size() > budget) proposals.resize(budget);
    for (const auto& p : proposals) result.labels[members[p.member]] = p.label;
    budget = proposals.size();
    result.changes.push_back(proposals.size());
  }
  return result;
}

std::vector<ClassLabel> clean_building_points(const PointCloud& cloud, const std::vector<ClassLabel>& labels,
                                              const SmoothParams& params) {
  params.validate();
  if (labels.size() != cloud.size()) throw Error(ErrorKind::LengthMismatch, "one label per point required");
  std::vector<ClassLabel> out = labels;
  const IdSet buildings = ids_with_label(labels, ClassLabel::Building);
  if (buildings.empty()) return out;
  const PointCloud sub = cloud.subset(buildings);
  const SpatialIndex index(sub);
  const double tol2 = params.color_tol * params.color_tol;
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != ClassLabel::Tree) continue;
    const Eigen::Vector3d c = cloud.colors.col(static_cast<Eigen::Index>(i)).cast<double>();
    for (Index k : index.radius_neighbors(Eigen::Vector3d(cloud.position(i)), params.clean_radius, Dims::Three)) {
      if ((sub.colors.col(static_cast<Eigen::Index>(k)).cast<double>() - c).squaredNorm() <= tol2) {
        out[i] = ClassLabel::Building;
        break;
      }
    }
  }
  return out;
}

}  // namespace terrafuse
