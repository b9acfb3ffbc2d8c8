#include "terrafuse/core/voxel.hpp"

#include <cmath>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

VoxelKey VoxelGrid::key_of(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d rel = (p - origin) / resolution;
  return {static_cast<std::int64_t>(std::floor(rel.x())), static_cast<std::int64_t>(std::floor(rel.y())),
          static_cast<std::int64_t>(std::floor(rel.z()))};
}

VoxelGrid voxelize(const PointCloud& cloud, double resolution) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "voxelize on empty cloud");
  if (!(resolution > 0)) throw Error(ErrorKind::InvalidArgument, "voxel resolution must be positive");
  VoxelGrid grid;
  grid.resolution = resolution;
  for (Index i = 0; i < cloud.size(); ++i) {
    VoxelCell& cell = grid.cells[grid.key_of(cloud.position(i))];
    cell.occupied = true;
    cell.count += 1;
    cell.centroid += cloud.position(i);
    cell.mean_color += cloud.colors.col(static_cast<Eigen::Index>(i)).cast<double>();
  }
  for (auto& [key, cell] : grid.cells) {
    cell.centroid /= static_cast<double>(cell.count);
    cell.mean_color /= static_cast<double>(cell.count);
  }
  return grid;
}

PointCloud voxel_subsample(const PointCloud& cloud, double cell) {
  const VoxelGrid grid = voxelize(cloud, cell);
  PointCloud out;
  out.geo_origin = cloud.geo_origin;
  out.crs_tag = cloud.crs_tag;
  out.positions.resize(3, static_cast<Eigen::Index>(grid.cells.size()));
  out.colors.resize(3, static_cast<Eigen::Index>(grid.cells.size()));
  Eigen::Index k = 0;
  for (const auto& [key, c] : grid.cells) {
    out.positions.col(k) = c.centroid;
    out.colors.col(k) = c.mean_color.array().round().cast<std::uint8_t>().matrix();
    ++k;
  }
  return out;
}

}  // namespace terrafuse
