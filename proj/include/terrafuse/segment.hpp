#pragma once

#include <vector>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

struct GroundParams {
  double grid_cell = 5.0;
  double height_tol = 0.5;  // metres above the seed surface
  double slope_tol = 0.35;  // rise over run between neighbouring seeds

  void validate() const;
};

struct SmoothParams {
  double radius = 1.5;
  std::size_t iterations = 2;
  double color_tol = 30.0;
  double clean_radius = 1.5;

  void validate() const;
};

/// Grid-minimum ground filter. Seeds are per-cell lowest points; seeds are
/// accepted by growing outward from the lowest one across 8-neighbouring cells
/// whose seed-to-seed slope stays within slope_tol. A point is ground when it
/// lies within height_tol of the surface interpolated from accepted seeds.
/// Throws EmptyCloud.
IdSet extract_ground(const PointCloud& cloud, const GroundParams& params);

struct GroundCleanup {
  IdSet kept;
  IdSet dropped;  // to be relabelled as non-ground
};

/// Keeps ground points whose 3D-linked component has at least min_comp points.
GroundCleanup ground_postprocess(const PointCloud& cloud, const IdSet& ground_ids, double link, std::size_t min_comp);

struct SmoothingResult {
  std::vector<ClassLabel> labels;
  /// Label changes applied in each iteration; never increases.
  std::vector<std::size_t> changes;
};

/// Majority-vote stand-in for CRF smoothing over Building/Tree points. Each
/// iteration, a non-ground point adopts the strict majority label among its
/// non-ground neighbours within radius; ties keep the label. An iteration
/// applies at most as many changes as the previous one, choosing the widest
/// majority margins first (ties by id). Ground and Unlabeled never change.
SmoothingResult smooth_labels(const PointCloud& cloud, const std::vector<ClassLabel>& labels, const SmoothParams& params);

/// Colour-proximity stand-in for building cleaning: a Tree point within
/// clean_radius of an input Building point whose RGB distance is at most
/// color_tol becomes Building. Single pass over the input labels.
std::vector<ClassLabel> clean_building_points(const PointCloud& cloud, const std::vector<ClassLabel>& labels,
                                              const SmoothParams& params);

}  // namespace terrafuse
