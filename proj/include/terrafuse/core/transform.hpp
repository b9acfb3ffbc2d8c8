#pragma once

#include "terrafuse/core/point_cloud.hpp"
#include "terrafuse/core/rigid_transform.hpp"

namespace terrafuse {

/// Maps every point to rotation * p + translation; colors, labels and the
/// georeference are carried over unchanged.
inline PointCloud apply_transform(const PointCloud& cloud, const RigidTransformd& t) {
  PointCloud out = cloud;
  out.positions = t(cloud.positions);
  return out;
}

}  // namespace terrafuse
