#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "terrafuse/core/error.hpp"
#include "terrafuse/core/point_cloud.hpp"
#include "terrafuse/core/spatial_index.hpp"

namespace terrafuse {

/// Neighbourhood PCA: eigenvalues sorted descending and divided by the largest,
/// eigenvectors as matching unit columns (e1, e2, e3).
template <typename Scalar>
struct EigenDecomposition {
  Eigen::Matrix<Scalar, 3, 1> lambdas = Eigen::Matrix<Scalar, 3, 1>::Zero();
  Eigen::Matrix<Scalar, 3, 3> evecs = Eigen::Matrix<Scalar, 3, 3>::Identity();
  /// Raw (unnormalized) largest eigenvalue.
  Scalar scale = 0;

  auto e3() const { return evecs.col(2); }
};

/// Population covariance (1/n) of the columns of a 3 x n matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> neighborhood_covariance(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<Scalar>(pts.cols());
  const Eigen::Matrix<Scalar, 3, 1> mean = pts.rowwise().mean();
  const auto centered = (pts.colwise() - mean).eval();
  return (centered * centered.transpose()) / n;
}

namespace detail {

template <typename Scalar>
std::optional<EigenDecomposition<Scalar>> try_covariance_eigen(const Eigen::Matrix<Scalar, 3, 3>& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 3, 3>> solver(cov);
  if (solver.info() != Eigen::Success) return std::nullopt;
  // Eigen returns ascending order.
  EigenDecomposition<Scalar> out;
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  out.scale = std::max(vals(2), Scalar(0));
  if (!(out.scale > 0)) return std::nullopt;
  for (int k = 0; k < 3; ++k) {
    out.lambdas(k) = std::max(vals(2 - k), Scalar(0)) / out.scale;
    out.evecs.col(k) = vecs.col(2 - k).normalized();
  }
  out.lambdas(0) = Scalar(1);
  return out;
}

}  // namespace detail

/// Throws InsufficientNeighbors (< 3 points) or DegenerateNeighborhood (all
/// points coincident).
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> covariance_eigen(const Eigen::MatrixBase<Derived>& pts) {
  if (pts.cols() < 3) throw Error(ErrorKind::InsufficientNeighbors, "covariance needs at least 3 points");
  auto out = detail::try_covariance_eigen(neighborhood_covariance(pts));
  if (!out) throw Error(ErrorKind::DegenerateNeighborhood, "all neighbours coincide");
  return *out;
}

/// 1 - |<up, e3>|; 0 on horizontal surfaces, 1 on vertical ones.
template <typename Derived>
typename Derived::Scalar verticality(const Eigen::MatrixBase<Derived>& e3) {
  using Scalar = typename Derived::Scalar;
  if (std::abs(e3.norm() - Scalar(1)) > Scalar(1e-6)) {
    throw Error(ErrorKind::NonUnitVector, "verticality needs a unit normal");
  }
  return std::clamp(Scalar(1) - std::abs(e3(2)), Scalar(0), Scalar(1));
}

/// Least-squares plane through the columns of a 3 x n matrix: returns the
/// centroid and unit normal, or nullopt for coincident or collinear input.
template <typename Derived>
std::optional<std::pair<Eigen::Matrix<typename Derived::Scalar, 3, 1>, Eigen::Matrix<typename Derived::Scalar, 3, 1>>>
fit_plane(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  if (pts.cols() < 3) return std::nullopt;
  const auto eig = detail::try_covariance_eigen(neighborhood_covariance(pts));
  if (!eig || eig->lambdas(1) < Scalar(1e-12)) return std::nullopt;
  return std::make_pair(Eigen::Matrix<Scalar, 3, 1>(pts.rowwise().mean()), Eigen::Matrix<Scalar, 3, 1>(eig->e3()));
}

/// Orthogonal distance from `center` to the neighbours' least-squares plane,
/// divided by `cap` and clamped to 1.
template <typename Derived, typename Vec>
typename Derived::Scalar roughness(const Eigen::MatrixBase<Derived>& neighbors, const Eigen::MatrixBase<Vec>& center,
                                   typename Derived::Scalar cap) {
  using Scalar = typename Derived::Scalar;
  if (!(cap > 0)) throw Error(ErrorKind::InvalidArgument, "roughness cap must be positive");
  if (neighbors.cols() < 3) throw Error(ErrorKind::InsufficientNeighbors, "plane fit needs at least 3 points");
  const auto plane = fit_plane(neighbors);
  if (!plane) throw Error(ErrorKind::DegenerateNeighborhood, "neighbours are collinear or coincident");
  const Scalar raw = std::abs((center - plane->first).dot(plane->second));
  return std::min(raw / cap, Scalar(1));
}

/// Number of other indexed points within 3D distance r of point `id`.
std::size_t density(const SpatialIndex& index, Index id, double r);

struct FeatureParams {
  double feature_radius = 1.5;
  double density_radius = 3.0;
  std::size_t min_neighbors = 8;
  double roughness_cap = 1.0;

  /// Throws ConfigError.
  void validate() const;
};

struct FeatureRecord {
  double verticality = 0;
  double roughness = 0;
  std::size_t density = 0;
  bool valid = false;
};

using FeatureSet = std::vector<FeatureRecord>;

/// Per-point features over `cloud` alone. A point is invalid when it has fewer
/// than min_neighbors neighbours within feature_radius or when those
/// neighbours do not span a plane.
FeatureSet compute_features(const PointCloud& cloud, const FeatureParams& params);
FeatureSet compute_features(const PointCloud& cloud, const SpatialIndex& index, const FeatureParams& params);

/// One line per point: "id verticality roughness density valid".
void write_feature_dump(const FeatureSet& features, std::ostream& out);

}  // namespace terrafuse
