#pragma once

#include <vector>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

struct ComponentResult {
  /// Component id per member, aligned with the member ids passed in. Ids are
  /// numbered in order of each component's smallest point id.
  std::vector<std::size_t> component;
  std::vector<std::size_t> component_sizes;
  /// Members that sit in a component of at least min_size points.
  IdSet surviving;
};

/// Single-linkage clustering of `members` under 3D distance <= link_dist.
ComponentResult connected_components(const PointCloud& cloud, const IdSet& members, double link_dist,
                                     std::size_t min_size);

}  // namespace terrafuse
