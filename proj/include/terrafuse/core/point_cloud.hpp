#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace terrafuse {

using Index = std::size_t;

/// Sorted, duplicate-free point ids.
using IdSet = std::vector<Index>;

enum class ClassLabel : std::uint8_t { Unlabeled = 0, Ground = 1, Building = 2, Tree = 3 };

/// Returns std::nullopt for codes outside the four known labels.
std::optional<ClassLabel> label_from_code(int code);
const char* label_name(ClassLabel label);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Point {
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Rgb color;
};

using Matrix3Xu8 = Eigen::Matrix<std::uint8_t, 3, Eigen::Dynamic>;

/// Column-major point storage. Coordinates are local, relative to geo_origin,
/// so world = geo_origin + position.
class PointCloud {
 public:
  Eigen::Matrix3Xd positions;
  Matrix3Xu8 colors;
  std::optional<std::vector<ClassLabel>> labels;
  Eigen::Vector3d geo_origin = Eigen::Vector3d::Zero();
  std::string crs_tag = "local";

  PointCloud() = default;
  PointCloud(Eigen::Matrix3Xd xyz, Matrix3Xu8 rgb);

  Index size() const { return static_cast<Index>(positions.cols()); }
  bool empty() const { return positions.cols() == 0; }

  Point point(Index i) const;
  Rgb color(Index i) const { return {colors(0, i), colors(1, i), colors(2, i)}; }
  auto position(Index i) const { return positions.col(static_cast<Eigen::Index>(i)); }

  /// Appends one point (reallocates; meant for small clouds).
  void push_back(const Point& p);
  void push_back(const Point& p, ClassLabel label);

  /// New cloud holding the given ids in order; georeference and labels follow.
  PointCloud subset(const IdSet& ids) const;

  /// Throws Error(InvalidArgument) when a structural invariant is broken.
  void validate() const;
};

/// Ids 0..n-1.
IdSet all_ids(Index n);
/// Ids in [0, n) not present in `ids`.
IdSet complement(const IdSet& ids, Index n);
/// Ids whose label equals `label`.
IdSet ids_with_label(const std::vector<ClassLabel>& labels, ClassLabel label);

}  // namespace terrafuse
