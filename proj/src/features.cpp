#include "terrafuse/features.hpp"

#include <ostream>

#include "terrafuse/core/io.hpp"
#include "terrafuse/core/parallel.hpp"

namespace terrafuse {

std::size_t density(const SpatialIndex& index, Index id, double r) { return index.count_neighbors(id, r, Dims::Three); }

void FeatureParams::validate() const {
  if (!(feature_radius > 0) || !(density_radius > 0)) throw Error(ErrorKind::ConfigError, "feature radii must be positive");
  if (!(roughness_cap > 0)) throw Error(ErrorKind::ConfigError, "roughness_cap must be positive");
  if (min_neighbors < 3) throw Error(ErrorKind::ConfigError, "min_neighbors must be at least 3");
}

FeatureSet compute_features(const PointCloud& cloud, const FeatureParams& params) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "features on empty cloud");
  return compute_features(cloud, SpatialIndex(cloud), params);
}

FeatureSet compute_features(const PointCloud& cloud, const SpatialIndex& index, const FeatureParams& params) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "features on empty cloud");
  params.validate();
  FeatureSet out(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    FeatureRecord& rec = out[i];
    rec.density = index.count_neighbors(i, params.density_radius, Dims::Three);
    const IdSet nbrs = index.radius_neighbors(i, params.feature_radius, Dims::Three);
    if (nbrs.size() < params.min_neighbors) return;
    // verticality uses the neighbourhood with its centre, roughness the neighbours alone
    Eigen::Matrix3Xd pts(3, static_cast<Eigen::Index>(nbrs.size() + 1));
    for (std::size_t k = 0; k < nbrs.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = cloud.position(nbrs[k]);
    pts.col(pts.cols() - 1) = cloud.position(i);
    const auto surface = fit_plane(pts);
    const auto plane = fit_plane(pts.leftCols(pts.cols() - 1));
    if (!surface || !plane) return;
    rec.verticality = std::clamp(1.0 - std::abs(surface->second.z()), 0.0, 1.0);
    const double raw = std::abs((cloud.position(i) - plane->first).dot(plane->second));
    rec.roughness = std::min(raw / params.roughness_cap, 1.0);
    rec.valid = true;
  });
  return out;
}

void write_feature_dump(const FeatureSet& features, std::ostream& out) {
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    out << i << ' ' << format_real(f.verticality) << ' ' << format_real(f.roughness) << ' ' << f.density << ' '
        << (f.valid ? 1 : 0) << '\n';
  }
}

}  // namespace terrafuse
