#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include "terrafuse/core/error.hpp"
#include "terrafuse/core/rigid_transform.hpp"

namespace terrafuse {

/// Least-squares rigid motion taking the columns of `source` onto the matching
/// columns of `target` (minimizes sum |R s + t - q|^2). The SVD solution is
/// sign-corrected so the result never contains a reflection.
/// Throws DegenerateCorrespondences for fewer than 3 pairs or collinear sources.
template <typename DerivedS, typename DerivedT>
RigidTransform<typename DerivedS::Scalar> estimate_rigid_transform(const Eigen::MatrixBase<DerivedS>& source,
                                                                   const Eigen::MatrixBase<DerivedT>& target) {
  using Scalar = typename DerivedS::Scalar;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  static_assert(DerivedS::RowsAtCompileTime == 3 && DerivedT::RowsAtCompileTime == 3, "expects 3 x n matrices");
  if (source.cols() != target.cols()) throw Error(ErrorKind::LengthMismatch, "source and target counts differ");
  if (source.cols() < 3) throw Error(ErrorKind::DegenerateCorrespondences, "need at least 3 correspondences");

  const Vector3 mu_s = source.rowwise().mean();
  const Vector3 mu_t = target.rowwise().mean();
  const auto src = (source.colwise() - mu_s).eval();
  const auto dst = (target.colwise() - mu_t).eval();

  const Eigen::JacobiSVD<Matrix3> spread((src * src.transpose()).eval());
  const auto& sv = spread.singularValues();
  if (!(sv(0) > 0) || sv(1) <= sv(0) * Scalar(1e-12)) {
    throw Error(ErrorKind::DegenerateCorrespondences, "source points are coincident or collinear");
  }

  const Matrix3 cross = dst * src.transpose();
  const Eigen::JacobiSVD<Matrix3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector3 signs = Vector3::Ones();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) signs(2) = -1;
  const Matrix3 rotation = svd.matrixU() * signs.asDiagonal() * svd.matrixV().transpose();
  return {rotation, mu_t - rotation * mu_s};
}

}  // namespace terrafuse
