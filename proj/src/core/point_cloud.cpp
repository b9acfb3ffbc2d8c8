#include "terrafuse/core/point_cloud.hpp"

#include <algorithm>
#include <cmath>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

std::optional<ClassLabel> label_from_code(int code) {
  if (code < 0 || code > 3) return std::nullopt;
  return static_cast<ClassLabel>(code);
}

const char* label_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::Unlabeled: return "unlabeled";
    case ClassLabel::Ground: return "ground";
    case ClassLabel::Building: return "building";
    case ClassLabel::Tree: return "tree";
  }
  return "unknown";
}

PointCloud::PointCloud(Eigen::Matrix3Xd xyz, Matrix3Xu8 rgb) : positions(std::move(xyz)), colors(std::move(rgb)) {
  if (positions.cols() != colors.cols()) {
    throw Error(ErrorKind::InvalidArgument, "position and color counts differ");
  }
}

Point PointCloud::point(Index i) const { return {positions.col(static_cast<Eigen::Index>(i)), color(i)}; }


void PointCloud::push_back(const Point& p) {
  const Eigen::Index n = positions.cols();
  positions.conservativeResize(Eigen::NoChange, n + 1);
  colors.conservativeResize(Eigen::NoChange, n + 1);
  positions.col(n) = p.xyz;
  colors.col(n) << p.color.r, p.color.g, p.color.b;
}

void PointCloud::push_back(const Point& p, ClassLabel label) {
  if (!labels) labels.emplace(size(), ClassLabel::Unlabeled);
  push_back(p);
  labels->push_back(label);
}

PointCloud PointCloud::subset(const IdSet& ids) const {
  PointCloud out;
  out.geo_origin = geo_origin;
  out.crs_tag = crs_tag;
  out.positions.resize(3, static_cast<Eigen::Index>(ids.size()));
  out.colors.resize(3, static_cast<Eigen::Index>(ids.size()));
  if (labels) out.labels.emplace();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(ids[k]);
    out.positions.col(static_cast<Eigen::Index>(k)) = positions.col(i);
    out.colors.col(static_cast<Eigen::Index>(k)) = colors.col(i);
    if (labels) out.labels->push_back((*labels)[ids[k]]);
  }
  return out;
}

void PointCloud::validate() const {
  if (positions.cols() != colors.cols()) throw Error(ErrorKind::InvalidArgument, "position and color counts differ");
  if (labels && labels->size() != size()) throw Error(ErrorKind::InvalidArgument, "label count differs from point count");
  if (!positions.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite coordinate");
  if (!geo_origin.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite geo_origin");
  if (crs_tag.empty()) throw Error(ErrorKind::InvalidArgument, "empty crs_tag");
}

IdSet all_ids(Index n) {
  IdSet ids(n);
  for (Index i = 0; i < n; ++i) ids[i] = i;
  return ids;
}

IdSet complement(const IdSet& ids, Index n) {
  IdSet out;
  out.reserve(n - std::min(n, ids.size()));
  std::size_t k = 0;
  for (Index i = 0; i < n; ++i) {
    while (k < ids.size() && ids[k] < i) ++k;
    if (k < ids.size() && ids[k] == i) continue;
    out.push_back(i);
  }
  return out;
}

IdSet ids_with_label(const std::vector<ClassLabel>& labels, ClassLabel label) {
  IdSet out;
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

}  // namespace terrafuse
