#include "terrafuse/fusion.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "terrafuse/core/error.hpp"
#include "terrafuse/core/io.hpp"
#include "terrafuse/core/kd_tree.hpp"
#include "terrafuse/core/parallel.hpp"
#include "terrafuse/core/spatial_index.hpp"
#include "terrafuse/core/transform.hpp"
#include "terrafuse/core/voxel.hpp"
#include "terrafuse/registration.hpp"

namespace terrafuse {

void IcpParams::validate() const {
  if (max_iterations < 1) throw Error(ErrorKind::ConfigError, "max_iterations must be at least 1");
  if (!(convergence_delta > 0) || !(max_correspondence_dist > 0) || !(subsample_cell > 0)) {
    throw Error(ErrorKind::ConfigError, "ICP parameters must be positive");
  }
}

void FusionConfig::validate() const {
  pass1.validate();
  pass2.validate();
  ground_pass.validate();
  ground.validate();
  if (!(footprint_cell > 0) || !(border_width > 0)) throw Error(ErrorKind::ConfigError, "footprint cell and border width must be positive");
  if (boundary_buffer < 0) throw Error(ErrorKind::ConfigError, "boundary buffer must be non-negative");
}

namespace {

struct Correspondences {
  std::vector<std::uint32_t> source;  // accepted source columns
  std::vector<std::uint32_t> target;
  double truncated_rms = 0;
  double inlier_rms = 0;
};

Correspondences match(const Eigen::Matrix3Xd& moved, const KdTree<double, 3>& tree, double max_dist) {
  const auto n = static_cast<std::size_t>(moved.cols());
  std::vector<std::pair<std::uint32_t, double>> nearest(n);
  parallel_for(n, [&](std::size_t i) { nearest[i] = tree.nearest(moved.col(static_cast<Eigen::Index>(i))); });
  Correspondences c;
  const double max2 = max_dist * max_dist;
  double truncated = 0, inlier = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = nearest[i].second;
    if (d2 <= max2) {
      c.source.push_back(static_cast<std::uint32_t>(i));
      c.target.push_back(nearest[i].first);
      inlier += d2;
      truncated += d2;
    } else {
      truncated += max2;
    }
  }
  c.truncated_rms = std::sqrt(truncated / static_cast<double>(n));
  c.inlier_rms = c.source.empty() ? 0.0 : std::sqrt(inlier / static_cast<double>(c.source.size()));
  return c;
}

}  // namespace

IcpResult icp(const PointCloud& source, const PointCloud& target, const RigidTransformd& init, const IcpParams& params) {
  if (source.empty() || target.empty()) throw Error(ErrorKind::EmptyCloud, "ICP needs two non-empty clouds");
  params.validate();
  if (!init.is_proper(1e-9)) throw Error(ErrorKind::InvalidArgument, "initial transform is not a proper rigid motion");

  const Eigen::Matrix3Xd src = voxel_subsample(source, params.subsample_cell).positions;
  const Eigen::Matrix3Xd tgt = voxel_subsample(target, params.subsample_cell).positions;
  const KdTree<double, 3> tree(tgt);

  IcpResult result{init, {}};
  Correspondences corr = match(init(src), tree, params.max_correspondence_dist);
  if (corr.source.empty()) {
    throw Error(ErrorKind::NoCorrespondences, "no source point within " +
                                                  format_real(params.max_correspondence_dist) + " m of the target");
  }
  result.stats.rms_history.push_back(corr.truncated_rms);

  for (std::size_t it = 0; it < params.max_iterations; ++it) {
    if (corr.source.size() < 3) break;
    const Eigen::Matrix3Xd moved = result.transform(src);
    Eigen::Matrix3Xd from(3, static_cast<Eigen::Index>(corr.source.size()));
    Eigen::Matrix3Xd to(3, static_cast<Eigen::Index>(corr.source.size()));
    for (std::size_t k = 0; k < corr.source.size(); ++k) {
      from.col(static_cast<Eigen::Index>(k)) = moved.col(corr.source[k]);
      to.col(static_cast<Eigen::Index>(k)) = tgt.col(corr.target[k]);
    }
    RigidTransformd step;
    try {
      step = estimate_rigid_transform(from, to);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateCorrespondences) break;
      throw;
    }
    const RigidTransformd candidate = step * result.transform;
    const double previous = corr.truncated_rms;
    Correspondences next = match(candidate(src), tree, params.max_correspondence_dist);
    // rounding can nudge the objective up at a fixed point; stop there instead
    if (next.truncated_rms > previous) {
      result.stats.converged = true;
      break;
    }
    result.transform = candidate;
    corr = std::move(next);
    result.stats.rms_history.push_back(corr.truncated_rms);
    result.stats.iterations = it + 1;
    if (std::abs(previous - corr.truncated_rms) < params.convergence_delta) {
      result.stats.converged = true;
      break;
    }
  }
  result.stats.inlier_rms = corr.inlier_rms;
  result.stats.correspondences = corr.source.size();
  return result;
}

RigidTransformd coarse_align(const PointCloud& uav, const PointCloud& bing) {
  for (const PointCloud* c : {&uav, &bing}) {
    if (c->crs_tag.empty() || !c->geo_origin.allFinite()) {
      throw Error(ErrorKind::MissingGeoreference, "cloud lacks a usable geo_origin / crs_tag");
    }
  }
  if (uav.crs_tag != bing.crs_tag) {
    throw Error(ErrorKind::CrsMismatch, "'" + uav.crs_tag + "' vs '" + bing.crs_tag + "'");
  }
  // world = origin + local, so a UAV local point sits at uav_origin - bing_origin + p in Bing local terms.
  return RigidTransformd::Translation(uav.geo_origin - bing.geo_origin);
}

GridCell Footprint::cell_of(const Eigen::Vector2d& xy) const {
  const Eigen::Vector2d rel = (xy - origin) / cell;
  return {static_cast<std::int64_t>(std::floor(rel.x())), static_cast<std::int64_t>(std::floor(rel.y()))};
}

double Footprint::distance_to_boundary(const Eigen::Vector2d& xy) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [cx, cy] : boundary) {
    const Eigen::Vector2d lo = origin + cell * Eigen::Vector2d(static_cast<double>(cx), static_cast<double>(cy));
    const Eigen::Vector2d hi = lo + Eigen::Vector2d::Constant(cell);
    const Eigen::Vector2d d = (lo - xy).cwiseMax(xy - hi).cwiseMax(0.0);
    best = std::min(best, d.norm());
  }
  return best;
}

Footprint compute_footprint(const PointCloud& cloud, double cell) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "footprint of empty cloud");
  if (!(cell > 0)) throw Error(ErrorKind::InvalidArgument, "footprint cell must be positive");
  Footprint fp;
  fp.cell = cell;
  fp.origin = cloud.positions.topRows<2>().rowwise().minCoeff();
  for (Index i = 0; i < cloud.size(); ++i) fp.occupied.insert(fp.cell_of(cloud.position(i).head<2>()));
  for (const auto& [x, y] : fp.occupied) {
    const bool interior = fp.occupied.count({x + 1, y}) && fp.occupied.count({x - 1, y}) &&
                          fp.occupied.count({x, y + 1}) && fp.occupied.count({x, y - 1});
    if (!interior) fp.boundary.insert({x, y});
  }
  return fp;
}

CropResult crop_overlap(const PointCloud& bing, const Footprint& fp, double buffer) {
  if (buffer < 0) throw Error(ErrorKind::InvalidArgument, "buffer must be non-negative");
  const auto k = static_cast<std::int64_t>(std::ceil(buffer / fp.cell));
  std::set<GridCell> dilated;
  for (const auto& [x, y] : fp.occupied) {
    for (std::int64_t dx = -k; dx <= k; ++dx) {
      for (std::int64_t dy = -k; dy <= k; ++dy) dilated.insert({x + dx, y + dy});
    }
  }
  CropResult out;
  for (Index i = 0; i < bing.size(); ++i) {
    if (dilated.count(fp.cell_of(bing.position(i).head<2>()))) out.kept.push_back(i);
  }
  out.cloud = bing.subset(out.kept);
  if (out.kept.empty()) out.warnings.push_back("crop_overlap: no Bing points inside the buffered footprint");
  return out;
}

CropResult remove_overlap(const PointCloud& bing, const Footprint& fp) {
  CropResult out;
  for (Index i = 0; i < bing.size(); ++i) {
    if (!fp.covers(bing.position(i).head<2>())) out.kept.push_back(i);
  }
  out.cloud = bing.subset(out.kept);
  if (out.kept.empty()) out.warnings.push_back("remove_overlap: footprint covers the whole Bing cloud");
  return out;
}

IdSet border_points(const PointCloud& cloud, const Footprint& fp, double border_width) {
  std::vector<char> keep(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t i) {
    keep[i] = fp.distance_to_boundary(cloud.position(i).head<2>()) <= border_width;
  });
  IdSet out;
  for (Index i = 0; i < cloud.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

GroundRegistration semantic_ground_register(const PointCloud& uav_ground, const PointCloud& bing_ground,
                                            const Footprint& fp, double border_width, const IcpParams& params) {
  if (uav_ground.empty() || bing_ground.empty()) throw Error(ErrorKind::EmptyCloud, "ground clouds must be non-empty");
  if (!(border_width > 0)) throw Error(ErrorKind::InvalidArgument, "border width must be positive");
  const IdSet uav_border = border_points(uav_ground, fp, border_width);
  const IdSet bing_border = border_points(bing_ground, fp, border_width);
  if (uav_border.empty() || bing_border.empty()) {
    throw Error(ErrorKind::EmptyBorder, "no ground points within " + format_real(border_width) + " m of the footprint border");
  }
  GroundRegistration out;
  out.uav_border_points = uav_border.size();
  out.bing_border_points = bing_border.size();
  const IcpResult fit = icp(uav_ground.subset(uav_border), bing_ground.subset(bing_border), RigidTransformd::Identity(), params);
  out.raw_transform = fit.transform;
  out.stats = fit.stats;
  out.transform = fit.transform;
  out.transform.translation.x() = 0.0;
  out.transform.translation.y() = 0.0;
  return out;
}

std::optional<double> border_gap(const PointCloud& uav_ground, const PointCloud& bing_ground, const Footprint& fp,
                                 double border_width) {
  if (uav_ground.empty() || bing_ground.empty()) return std::nullopt;
  IdSet outside;
  for (Index i = 0; i < bing_ground.size(); ++i) {
    if (!fp.covers(bing_ground.position(i).head<2>())) outside.push_back(i);
  }
  const IdSet bing_strip = [&] {
    const PointCloud o = bing_ground.subset(outside);
    IdSet strip;
    for (Index k : border_points(o, fp, border_width)) strip.push_back(outside[k]);
    return strip;
  }();
  IdSet uav_strip;
  for (Index i : border_points(uav_ground, fp, border_width)) {
    if (fp.covers(uav_ground.position(i).head<2>())) uav_strip.push_back(i);
  }
  if (bing_strip.empty() || uav_strip.empty()) return std::nullopt;
  const PointCloud bing_sub = bing_ground.subset(bing_strip);
  const SpatialIndex index(bing_sub);
  double sum = 0;
  for (Index i : uav_strip) {
    const Eigen::Vector3d p = uav_ground.position(i);
    const auto [k, d] = index.nearest(p, Dims::Two);
    sum += std::abs(p.z() - bing_sub.position(k).z());
  }
  return sum / static_cast<double>(uav_strip.size());
}

FusionResult fuse(const PointCloud& uav, const PointCloud& bing, const std::optional<GroundLabels>& labels,
                  const FusionConfig& config) {
  config.validate();
  if (uav.empty() || bing.empty()) throw Error(ErrorKind::EmptyCloud, "fusion needs two non-empty clouds");
  FusionResult result;

  result.coarse = coarse_align(uav, bing);
  const PointCloud uav0 = apply_transform(uav, result.coarse);

  const PointCloud* pass1_target = &bing;
  CropResult precropped;
  if (config.precrop_pass1) {
    precropped = crop_overlap(bing, compute_footprint(uav0, config.footprint_cell), config.boundary_buffer);
    for (auto& w : precropped.warnings) result.warnings.push_back(w);
    pass1_target = &precropped.cloud;
  }
  const IcpResult pass1 = icp(uav0, *pass1_target, RigidTransformd::Identity(), config.pass1);
  result.pass1 = pass1.transform;
  result.diagnostics.pass1_rms = pass1.stats.inlier_rms;
  const PointCloud uav1 = apply_transform(uav0, result.pass1);

  CropResult overlap = crop_overlap(bing, compute_footprint(uav1, config.footprint_cell), config.boundary_buffer);
  for (auto& w : overlap.warnings) result.warnings.push_back(w);
  if (overlap.cloud.empty()) throw Error(ErrorKind::NoCorrespondences, "pass two: Bing overlap region is empty");
  const IcpResult pass2 = icp(uav1, overlap.cloud, RigidTransformd::Identity(), config.pass2);
  result.pass2 = pass2.transform;
  result.diagnostics.pass2_rms = pass2.stats.inlier_rms;
  const PointCloud uav2 = apply_transform(uav1, result.pass2);
  const Footprint fp2 = compute_footprint(uav2, config.footprint_cell);

  std::optional<GroundLabels> ground = labels;
  if (!ground && config.semantic) {
    try {
      ground = GroundLabels{extract_ground(uav, config.ground), extract_ground(bing, config.ground)};
    } catch (const Error& e) {
      result.warnings.push_back(std::string("ground extraction failed: ") + e.what());
    }
  }
  std::optional<PointCloud> bing_ground, uav2_ground;
  if (ground && !ground->uav.empty() && !ground->bing.empty()) {
    bing_ground = bing.subset(ground->bing);
    uav2_ground = uav2.subset(ground->uav);
    result.diagnostics.border_gap_before = border_gap(*uav2_ground, *bing_ground, fp2, config.border_width);
  }

  result.ground = RigidTransformd::Identity();
  if (config.semantic) {
    if (!bing_ground) {
      result.warnings.push_back("semantic stage skipped: no ground points");
    } else {
      try {
        const GroundRegistration reg =
            semantic_ground_register(*uav2_ground, *bing_ground, fp2, config.border_width, config.ground_pass);
        result.ground = reg.transform;
        result.diagnostics.ground_rms = reg.stats.inlier_rms;
      } catch (const Error& e) {
        result.warnings.push_back(std::string("semantic stage failed, keeping two-pass result: ") + e.what());
      }
    }
  }

  result.final_transform = result.ground * result.pass2 * result.pass1 * result.coarse;
  result.aligned_uav = apply_transform(uav, result.final_transform);
  result.aligned_uav.geo_origin = bing.geo_origin;
  result.aligned_uav.crs_tag = bing.crs_tag;
  if (bing_ground) {
    const PointCloud final_ground = result.aligned_uav.subset(ground->uav);
    result.diagnostics.border_gap_after = border_gap(final_ground, *bing_ground, fp2, config.border_width);
  }

  CropResult trimmed = remove_overlap(bing, compute_footprint(result.aligned_uav, config.footprint_cell));
  for (auto& w : trimmed.warnings) result.warnings.push_back(w);
  result.diagnostics.bing_points_removed = bing.size() - trimmed.cloud.size();
  result.trimmed_bing = std::move(trimmed.cloud);
  return result;
}

void write_transform(const RigidTransformd& t, std::ostream& out) {
  const Eigen::Matrix4d m = t.matrix();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out << (c ? " " : "") << format_real(m(r, c));
    out << '\n';
  }
}

RigidTransformd read_transform(std::istream& in) {
  Eigen::Matrix4d m;
  for (int k = 0; k < 16; ++k) {
    if (!(in >> m(k / 4, k % 4))) throw Error(ErrorKind::ParseError, "transform needs 16 values");
  }
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::ParseError, "last transform row must be 0 0 0 1");
  }
  return RigidTransformd::Checked(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

namespace {

nlohmann::ordered_json to_json(const RigidTransformd& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const Eigen::Matrix4d m = t.matrix();
  for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  return rows;
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string diagnostics_to_json(const FusionResult& result) {
  nlohmann::ordered_json j;
  const auto& d = result.diagnostics;
  j["pass1_rms"] = d.pass1_rms;
  j["pass2_rms"] = d.pass2_rms;
  j["ground_rms"] = optional_json(d.ground_rms);
  j["border_gap_mean_abs_dz_before"] = optional_json(d.border_gap_before);
  j["border_gap_mean_abs_dz_after"] = optional_json(d.border_gap_after);
  j["bing_points_removed"] = d.bing_points_removed;
  j["bing_points_kept"] = result.trimmed_bing.size();
  j["transforms"] = {{"coarse", to_json(result.coarse)}, {"pass1", to_json(result.pass1)},
                     {"pass2", to_json(result.pass2)},   {"ground", to_json(result.ground)},
                     {"final", to_json(result.final_transform)}};
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

}  // namespace terrafuse
