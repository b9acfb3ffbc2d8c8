#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

/// Desk-scale stand-in for photogrammetric city data: a noisy ground plane,
/// flat-roofed box buildings and tree crowns made of foliage clumps inside an
/// ellipsoidal envelope, all labelled.
struct SceneSpec {
  double extent_x = 120.0;
  double extent_y = 120.0;
  double spacing = 0.5;
  double ground_noise = 0.1;  // +/- metres

  std::size_t building_count = 3;
  double footprint_min = 12.0;
  double footprint_max = 22.0;
  double height_min = 6.0;
  double height_max = 15.0;

  std::size_t tree_count = 8;
  double crown_radius_min = 2.5;
  double crown_radius_max = 4.0;
  /// Foliage clumps are thin spherical shells packed inside the crown envelope.
  double clump_radius = 1.0;
  /// Minimum surface-to-surface gap between clumps.
  double clump_gap = 1.5;
  /// Radial jitter of crown points as a fraction of the clump radius.
  double crown_jitter = 0.1;
  /// Share of tree points whose blue channel is drawn at or above 60.
  double tree_blue_fraction = 0.05;
  /// Horizontal gap kept between structures.
  double clearance = 6.0;

  /// Parabolic sag at the scene centre, zero at the corners.
  double bowl_depth = 0.0;

  Eigen::Vector3d geo_origin = Eigen::Vector3d::Zero();
  std::string crs_tag = "local";
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticScene {
  PointCloud cloud;  // labels hold the truth
  std::vector<ClassLabel> truth;
  std::size_t buildings = 0;
  std::size_t trees = 0;
};

/// Deterministic for a fixed spec. Throws SpecError when structures cannot be
/// placed inside the extent.
SyntheticScene generate_synthetic_scene(const SceneSpec& spec);

/// z -= depth * (1 - (r / radius)^2) for r < radius, r the x-y distance to `center`.
void apply_bowl_warp(PointCloud& cloud, const Eigen::Vector2d& center, double radius, double depth);

}  // namespace terrafuse
