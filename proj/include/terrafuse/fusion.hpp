#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "terrafuse/core/point_cloud.hpp"
#include "terrafuse/core/rigid_transform.hpp"
#include "terrafuse/segment.hpp"

namespace terrafuse {

struct IcpParams {
  std::size_t max_iterations = 50;
  double convergence_delta = 1e-6;        // metres of RMS change
  double max_correspondence_dist = 10.0;  // pairs farther apart are rejected
  double subsample_cell = 0.5;

  void validate() const;
};

struct IcpStats {
  /// Truncated RMS, sqrt(mean(min(d, max_correspondence_dist)^2)) over all
  /// subsampled source points. Entry 0 is at the initial transform, entry k
  /// after the k-th update. Never increases.
  std::vector<double> rms_history;
  /// RMS over accepted pairs at the final transform.
  double inlier_rms = 0;
  std::size_t correspondences = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct IcpResult {
  RigidTransformd transform;  // includes `init`
  IcpStats stats;
};

/// Point-to-point ICP taking `source` onto `target`; both clouds are voxel
/// subsampled first. Throws NoCorrespondences when nothing pairs up at init.
IcpResult icp(const PointCloud& source, const PointCloud& target, const RigidTransformd& init, const IcpParams& params);

/// Translation expressing UAV local coordinates in the Bing local frame.
/// Throws MissingGeoreference, CrsMismatch.
RigidTransformd coarse_align(const PointCloud& uav, const PointCloud& bing);

using GridCell = std::pair<std::int64_t, std::int64_t>;

/// x-y occupancy grid of a cloud.
struct Footprint {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double cell = 5.0;
  std::set<GridCell> occupied;
  /// Occupied cells with an unoccupied 4-neighbour.
  std::set<GridCell> boundary;

  GridCell cell_of(const Eigen::Vector2d& xy) const;
  bool covers(const Eigen::Vector2d& xy) const { return occupied.count(cell_of(xy)) > 0; }
  /// x-y distance from a location to the nearest boundary cell (0 inside one).
  double distance_to_boundary(const Eigen::Vector2d& xy) const;
};

/// Throws EmptyCloud.
Footprint compute_footprint(const PointCloud& cloud, double cell);

struct CropResult {
  PointCloud cloud;
  IdSet kept;  // ids into the input cloud
  std::vector<std::string> warnings;
};

/// Points whose cell lies within the footprint dilated by ceil(buffer / cell)
/// cells (Chebyshev).
CropResult crop_overlap(const PointCloud& bing, const Footprint& fp, double buffer);

/// Points whose cell is not occupied by the footprint.
CropResult remove_overlap(const PointCloud& bing, const Footprint& fp);

/// Ids of points within border_width (x-y) of the footprint boundary.
IdSet border_points(const PointCloud& cloud, const Footprint& fp, double border_width);

struct GroundRegistration {
  RigidTransformd transform;      // translation x and y are exactly zero
  RigidTransformd raw_transform;  // ICP output before zeroing
  IcpStats stats;
  std::size_t uav_border_points = 0;
  std::size_t bing_border_points = 0;
};

/// ICP between the ground points near the footprint border of both clouds,
/// then x/y translation zeroed. Throws EmptyBorder, NoCorrespondences.
GroundRegistration semantic_ground_register(const PointCloud& uav_ground, const PointCloud& bing_ground,
                                            const Footprint& fp, double border_width, const IcpParams& params);

/// Mean |dz| between UAV ground points within border_width of the footprint
/// boundary and their x-y nearest Bing ground point. nullopt without points.
std::optional<double> border_gap(const PointCloud& uav_ground, const PointCloud& bing_ground, const Footprint& fp,
                                 double border_width);

struct FusionConfig {
  IcpParams pass1{50, 1e-6, 10.0, 0.5};
  IcpParams pass2{50, 1e-6, 2.0, 0.5};
  IcpParams ground_pass{50, 1e-6, 2.0, 0.5};
  double footprint_cell = 5.0;
  double boundary_buffer = 20.0;
  double border_width = 15.0;
  bool semantic = true;
  /// Run pass one against the Bing cloud pre-cropped to the buffered footprint.
  bool precrop_pass1 = false;
  GroundParams ground;

  void validate() const;
};

struct GroundLabels {
  IdSet uav;
  IdSet bing;
};

struct FusionDiagnostics {
  double pass1_rms = 0;
  double pass2_rms = 0;
  std::optional<double> ground_rms;
  std::optional<double> border_gap_before;  // after pass two
  std::optional<double> border_gap_after;   // with the final transform
  std::size_t bing_points_removed = 0;
};

struct FusionResult {
  RigidTransformd coarse, pass1, pass2, ground;
  /// ground * pass2 * pass1 * coarse.
  RigidTransformd final_transform;
  PointCloud trimmed_bing;
  PointCloud aligned_uav;
  FusionDiagnostics diagnostics;
  std::vector<std::string> warnings;
};

/// Georeference alignment, two ICP passes (the second against the buffered
/// overlap), optional ground-border refinement, then overlap removal. Ground
/// ids are taken from `labels` when given, else extracted.
FusionResult fuse(const PointCloud& uav, const PointCloud& bing, const std::optional<GroundLabels>& labels,
                  const FusionConfig& config);

/// 16 values, row-major 4x4, one row per line.
void write_transform(const RigidTransformd& t, std::ostream& out);
RigidTransformd read_transform(std::istream& in);

std::string diagnostics_to_json(const FusionResult& result);

}  // namespace terrafuse
