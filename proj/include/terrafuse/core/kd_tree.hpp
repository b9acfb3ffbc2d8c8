#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace terrafuse {

/// Static kd-tree over the columns of a Dim x N matrix. Exact radius and
/// nearest-neighbour queries; results come back as column indices.
template <typename Scalar, int Dim>
class KdTree {
 public:
  using Vector = Eigen::Matrix<Scalar, Dim, 1>;
  using Matrix = Eigen::Matrix<Scalar, Dim, Eigen::Dynamic>;

  KdTree() = default;

  template <typename Derived>
  explicit KdTree(const Eigen::MatrixBase<Derived>& points) : points_(points) {
    order_.resize(static_cast<std::size_t>(points_.cols()));
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    nodes_.reserve(2 * order_.size() / kLeafSize + 2);
    if (!order_.empty()) build(0, static_cast<std::uint32_t>(order_.size()));
  }

  std::size_t size() const { return order_.size(); }
  const Matrix& points() const { return points_; }

  /// Appends every index with squared distance <= radius^2 to `out` (unsorted).
  void radius_search(const Vector& query, Scalar radius, std::vector<std::uint32_t>& out) const {
    if (nodes_.empty()) return;
    radius_search(0, query, radius * radius, out);
  }

  std::size_t radius_count(const Vector& query, Scalar radius) const {
    if (nodes_.empty()) return 0;
    return radius_count(0, query, radius * radius);
  }

  /// Nearest index and squared distance; ties resolve to the smaller index.
  std::pair<std::uint32_t, Scalar> nearest(const Vector& query) const {
    std::pair<std::uint32_t, Scalar> best{std::numeric_limits<std::uint32_t>::max(),
                                          std::numeric_limits<Scalar>::infinity()};
    if (!nodes_.empty()) nearest(0, query, best);
    return best;
  }

 private:
  static constexpr std::uint32_t kLeafSize = 16;

  struct Node {
    std::uint32_t begin, end;
    std::uint32_t left = 0, right = 0;  // 0 marks a leaf (root is never a child)
    int axis = 0;
    Scalar split = 0;
    Vector lo, hi;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, 0, 0, 0, Scalar(0), Vector::Zero(), Vector::Zero()});
    Vector lo = Vector::Constant(std::numeric_limits<Scalar>::infinity());
    Vector hi = -lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      lo = lo.cwiseMin(points_.col(order_[i]));
      hi = hi.cwiseMax(points_.col(order_[i]));
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (end - begin <= kLeafSize) return id;

    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const Scalar va = points_(axis, a), vb = points_(axis, b);
                       return va < vb || (va == vb && a < b);
                     });
    nodes_[id].axis = axis;
    nodes_[id].split = points_(axis, order_[mid]);
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  static Scalar box_distance2(const Node& n, const Vector& q) {
    const Vector d = (n.lo - q).cwiseMax(q - n.hi).cwiseMax(Scalar(0));
    return d.squaredNorm();
  }

  void radius_search(std::uint32_t id, const Vector& q, Scalar r2, std::vector<std::uint32_t>& out) const {
    const Node& n = nodes_[id];
    if (box_distance2(n, q) > r2) return;
    if (n.left == 0) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const std::uint32_t p = order_[i];
        if ((points_.col(p) - q).squaredNorm() <= r2) out.push_back(p);
      }
      return;
    }
    radius_search(n.left, q, r2, out);
    radius_search(n.right, q, r2, out);
  }

  std::size_t radius_count(std::uint32_t id, const Vector& q, Scalar r2) const {
    const Node& n = nodes_[id];
    if (box_distance2(n, q) > r2) return 0;
    if (n.left == 0) {
      std::size_t c = 0;
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        c += (points_.col(order_[i]) - q).squaredNorm() <= r2;
      }
      return c;
    }
    return radius_count(n.left, q, r2) + radius_count(n.right, q, r2);
  }

  void nearest(std::uint32_t id, const Vector& q, std::pair<std::uint32_t, Scalar>& best) const {
    const Node& n = nodes_[id];
    if (box_distance2(n, q) > best.second) return;
    if (n.left == 0) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const std::uint32_t p = order_[i];
        const Scalar d2 = (points_.col(p) - q).squaredNorm();
        if (d2 < best.second || (d2 == best.second && p < best.first)) best = {p, d2};
      }
      return;
    }
    const bool go_left = q(n.axis) < n.split;
    nearest(go_left ? n.left : n.right, q, best);
    nearest(go_left ? n.right : n.left, q, best);
  }

  Matrix points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace terrafuse
