#pragma once

// Brute-force reference computations for the unit and acceptance suites.
// Nothing here calls into the library's numerical paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Vec3 = std::array<double, 3>;

inline double dist2(const Vec3& a, const Vec3& b, int dims) {
  double s = 0;
  for (int k = 0; k < dims; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

/// Ids with distance <= r to q (self id excluded when given).
inline std::vector<std::size_t> radius(const std::vector<Vec3>& pts, const Vec3& q, double r, int dims,
                                       std::ptrdiff_t self = -1) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == self) continue;
    if (dist2(pts[i], q, dims) <= r * r) out.push_back(i);
  }
  return out;
}

/// Component label per member via breadth-first flooding over all pairs.
inline std::vector<std::size_t> components(const std::vector<Vec3>& pts, double link) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> label(n, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != SIZE_MAX) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        if (label[b] == SIZE_MAX && dist2(pts[a], pts[b], 3) <= link * link) {
          label[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  return label;
}

/// True when two labelings induce the same partition.
inline bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Textbook (1/n) sum (p - mean)(p - mean)^T.
inline Mat3 covariance(const std::vector<Vec3>& pts) {
  Vec3 mean{0, 0, 0};
  for (const auto& p : pts)
    for (int k = 0; k < 3; ++k) mean[k] += p[k];
  for (auto& m : mean) m /= static_cast<double>(pts.size());
  Mat3 c{};
  for (const auto& p : pts)
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) c[r][s] += (p[r] - mean[r]) * (p[s] - mean[s]);
  for (auto& row : c)
    for (auto& v : row) v /= static_cast<double>(pts.size());
  return c;
}

/// Roots of the characteristic polynomial of a symmetric 3x3 matrix
/// (trigonometric closed form), descending.
inline Vec3 eigenvalues(const Mat3& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) + 2 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0) return {q, q, q};
  Mat3 b{};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) b[r][s] = (a[r][s] - (r == s ? q : 0.0)) / p;
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double rr = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(rr) / 3.0;
  const double e1 = q + 2 * p * std::cos(phi);
  const double e3 = q + 2 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {e1, 3 * q - e1 - e3, e3};
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

/// Unit null vector of (a - lambda I) from the largest cross product of its rows.
inline Vec3 eigenvector(const Mat3& a, double lambda) {
  Mat3 m = a;
  for (int k = 0; k < 3; ++k) m[k][k] -= lambda;
  const std::array<Vec3, 3> cands{cross(m[0], m[1]), cross(m[0], m[2]), cross(m[1], m[2])};
  const Vec3* best = &cands[0];
  for (const auto& c : cands)
    if (norm(c) > norm(*best)) best = &c;
  const double n = norm(*best);
  return {(*best)[0] / n, (*best)[1] / n, (*best)[2] / n};
}

/// Orthogonal distance from `center` to the total-least-squares plane of `pts`.
inline double plane_distance(const std::vector<Vec3>& pts, const Vec3& center) {
  const Mat3 c = covariance(pts);
  const Vec3 normal = eigenvector(c, eigenvalues(c)[2]);
  Vec3 mean{0, 0, 0};
  for (const auto& p : pts)
    for (int k = 0; k < 3; ++k) mean[k] += p[k] / static_cast<double>(pts.size());
  double d = 0;
  for (int k = 0; k < 3; ++k) d += (center[k] - mean[k]) * normal[k];
  return std::abs(d);
}

/// Per-class TP/FP/FN by direct set operations on label sequences.
struct SetCounts {
  std::int64_t tp = 0, fp = 0, fn = 0;
};

template <typename Label>
SetCounts set_counts(const std::vector<Label>& pred, const std::vector<Label>& truth, Label cls, Label skip) {
  SetCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == skip || truth[i] == skip) continue;
    const bool in_pred = pred[i] == cls, in_truth = truth[i] == cls;
    c.tp += in_pred && in_truth;
    c.fp += in_pred && !in_truth;
    c.fn += !in_pred && in_truth;
  }
  return c;
}

}  // namespace oracle
