#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

/// Proper rigid motion x -> rotation * x + translation.
template <typename Scalar>
struct RigidTransform {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  static RigidTransform Identity() { return {}; }

  static RigidTransform Translation(const Vector3& t) { return {Matrix3::Identity(), t}; }

  static RigidTransform FromAngleAxis(Scalar angle, const Vector3& axis, const Vector3& t = Vector3::Zero()) {
    return {Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix(), t};
  }

  /// Throws InvalidArgument unless the rotation is orthonormal with det +1 within tol.
  static RigidTransform Checked(const Matrix3& r, const Vector3& t, Scalar tol = Scalar(1e-9)) {
    RigidTransform out{r, t};
    if (!out.is_proper(tol)) {
      throw Error(ErrorKind::InvalidArgument, "rotation is not a proper orthonormal matrix");
    }
    return out;
  }

  bool is_proper(Scalar tol = Scalar(1e-9)) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    const Scalar ortho = (rotation.transpose() * rotation - Matrix3::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(rotation.determinant() - Scalar(1)) <= tol;
  }

  template <typename Derived>
  auto operator()(const Eigen::MatrixBase<Derived>& points) const {
    return ((rotation * points).colwise() + translation).eval();
  }

  /// (a * b)(x) = a(b(x)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
  }

  RigidTransform inverse() const {
    const Matrix3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  Matrix4 matrix() const {
    Matrix4 m = Matrix4::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  /// Rotation angle of the relative motion between two transforms, radians.
  static Scalar rotation_angle(const Matrix3& r) {
    const Scalar c = std::clamp((r.trace() - Scalar(1)) / Scalar(2), Scalar(-1), Scalar(1));
    return std::acos(c);
  }
};

using RigidTransformd = RigidTransform<double>;

}  // namespace terrafuse
