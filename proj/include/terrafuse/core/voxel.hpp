#pragma once

#include <array>
#include <cstdint>
#include <map>

#include <Eigen/Core>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

using VoxelKey = std::array<std::int64_t, 3>;

struct VoxelCell {
  bool occupied = false;
  Eigen::Vector3d mean_color = Eigen::Vector3d::Zero();
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::size_t count = 0;
};

/// Sparse occupancy grid. Cell k covers [origin + k * resolution, origin + (k + 1) * resolution).
struct VoxelGrid {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double resolution = 1.0;
  std::map<VoxelKey, VoxelCell> cells;

  VoxelKey key_of(const Eigen::Vector3d& p) const;
};

/// Throws EmptyCloud, InvalidArgument (resolution <= 0).
VoxelGrid voxelize(const PointCloud& cloud, double resolution);

/// One point per occupied cell at the centroid, with the cell's mean color
/// (rounded). Output ordered by cell key. Labels are dropped.
PointCloud voxel_subsample(const PointCloud& cloud, double cell);

}  // namespace terrafuse
