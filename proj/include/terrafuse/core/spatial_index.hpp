#pragma once

#include <vector>

#include "terrafuse/core/kd_tree.hpp"
#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

enum class Dims { Two = 2, Three = 3 };

/// Immutable 2D (x, y) and 3D search structure over a cloud's points.
/// Safe for concurrent queries.
class SpatialIndex {
 public:
  /// Throws EmptyCloud on an empty cloud.
  explicit SpatialIndex(const PointCloud& cloud);
  template <typename Derived>
  explicit SpatialIndex(const Eigen::MatrixBase<Derived>& positions)
      : tree3_(positions), tree2_(positions.template topRows<2>()) {
    check_nonempty();
  }

  std::size_t size() const { return tree3_.size(); }

  /// Ids within distance r of an arbitrary location, ascending. Nothing is
  /// excluded: the location is not known to be a member.
  IdSet radius_neighbors(const Eigen::Vector3d& query, double r, Dims dims) const;

  /// Ids within distance r of indexed point `id`, ascending, excluding `id`.
  IdSet radius_neighbors(Index id, double r, Dims dims) const;

  /// Number of other indexed points within distance r of indexed point `id`.
  std::size_t count_neighbors(Index id, double r, Dims dims) const;

  /// Nearest indexed point and its distance.
  std::pair<Index, double> nearest(const Eigen::Vector3d& query, Dims dims) const;

  auto position(Index id) const { return tree3_.points().col(static_cast<Eigen::Index>(id)); }

 private:
  void check_nonempty() const;

  KdTree<double, 3> tree3_;
  KdTree<double, 2> tree2_;
};

}  // namespace terrafuse
