#include "terrafuse/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

void SceneSpec::validate() const {
  if (!(extent_x > 0) || !(extent_y > 0) || !(spacing > 0)) throw Error(ErrorKind::SpecError, "extent and spacing must be positive");
  if (ground_noise < 0 || crown_jitter < 0 || crown_jitter >= 1) throw Error(ErrorKind::SpecError, "noise/jitter out of range");
  if (!(clump_radius > 0) || clump_gap < 0) throw Error(ErrorKind::SpecError, "clump radius must be positive, gap non-negative");
  if (!(footprint_min > 0) || footprint_max < footprint_min) throw Error(ErrorKind::SpecError, "bad footprint range");
  if (!(height_min > 0) || height_max < height_min) throw Error(ErrorKind::SpecError, "bad height range");
  if (!(crown_radius_min > 0) || crown_radius_max < crown_radius_min) throw Error(ErrorKind::SpecError, "bad crown range");
  if (tree_blue_fraction < 0 || tree_blue_fraction > 1) throw Error(ErrorKind::SpecError, "tree_blue_fraction outside [0, 1]");
  if (clearance < 0) throw Error(ErrorKind::SpecError, "clearance must be non-negative");
  if (crs_tag.empty()) throw Error(ErrorKind::SpecError, "empty crs_tag");
}

void apply_bowl_warp(PointCloud& cloud, const Eigen::Vector2d& center, double radius, double depth) {
  for (Eigen::Index i = 0; i < cloud.positions.cols(); ++i) {
    const double r = (cloud.positions.col(i).head<2>() - center).norm();
    if (r < radius) cloud.positions(2, i) -= depth * (1.0 - (r / radius) * (r / radius));
  }
}

namespace {

struct Box {
  double x0, y0, x1, y1, base, height;
  bool contains(double x, double y) const { return x > x0 && x < x1 && y > y0 && y < y1; }
  double gap_to(double x, double y) const {
    const double dx = std::max({x0 - x, 0.0, x - x1});
    const double dy = std::max({y0 - y, 0.0, y - y1});
    return std::hypot(dx, dy);
  }
};

struct Crown {
  double x, y, radius;
};

class SceneBuilder {
 public:
  explicit SceneBuilder(const SceneSpec& spec) : spec_(spec), rng_(spec.seed) {}

  SyntheticScene build() {
    place_buildings();
    place_trees();
    sample_ground();
    for (const Box& b : boxes_) sample_building(b);
    for (const Crown& c : crowns_) sample_tree(c);

    SyntheticScene scene;
    const auto n = static_cast<Eigen::Index>(labels_.size());
    scene.cloud.positions = Eigen::Map<const Eigen::Matrix3Xd>(xyz_.data(), 3, n);
    scene.cloud.colors = Eigen::Map<const Matrix3Xu8>(rgb_.data(), 3, n);
    scene.cloud.labels = std::move(labels_);
    scene.cloud.geo_origin = spec_.geo_origin;
    scene.cloud.crs_tag = spec_.crs_tag;
    if (spec_.bowl_depth != 0) {
      apply_bowl_warp(scene.cloud, Eigen::Vector2d::Zero(), std::hypot(spec_.extent_x, spec_.extent_y) / 2,
                      spec_.bowl_depth);
    }
    scene.truth = *scene.cloud.labels;
    scene.buildings = boxes_.size();
    scene.trees = crowns_.size();
    return scene;
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  double half_x() const { return spec_.extent_x / 2; }
  double half_y() const { return spec_.extent_y / 2; }

  void place_buildings() {
    for (std::size_t b = 0; b < spec_.building_count; ++b) {
      bool placed = false;
      for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
        const double w = uniform(spec_.footprint_min, spec_.footprint_max);
        const double d = uniform(spec_.footprint_min, spec_.footprint_max);
        const double margin = spec_.clearance;
        if (w + 2 * margin >= spec_.extent_x || d + 2 * margin >= spec_.extent_y) break;
        const double cx = uniform(-half_x() + margin + w / 2, half_x() - margin - w / 2);
        const double cy = uniform(-half_y() + margin + d / 2, half_y() - margin - d / 2);
        Box box{cx - w / 2, cy - d / 2, cx + w / 2, cy + d / 2, 0.0, uniform(spec_.height_min, spec_.height_max)};
        bool clear = true;
        for (const Box& o : boxes_) {
          const bool apart = box.x1 + spec_.clearance < o.x0 || o.x1 + spec_.clearance < box.x0 ||
                             box.y1 + spec_.clearance < o.y0 || o.y1 + spec_.clearance < box.y0;
          clear = clear && apart;
        }
        if (clear) {
          boxes_.push_back(box);
          placed = true;
        }
      }
      if (!placed) throw Error(ErrorKind::SpecError, "cannot place building " + std::to_string(b) + " inside the extent");
    }
  }

  void place_trees() {
    for (std::size_t t = 0; t < spec_.tree_count; ++t) {
      bool placed = false;
      for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
        const double r = uniform(spec_.crown_radius_min, spec_.crown_radius_max);
        if (2 * r >= spec_.extent_x || 2 * r >= spec_.extent_y) break;
        const double x = uniform(-half_x() + r, half_x() - r);
        const double y = uniform(-half_y() + r, half_y() - r);
        bool clear = true;
        for (const Box& b : boxes_) clear = clear && b.gap_to(x, y) > r + spec_.clearance;
        for (const Crown& c : crowns_) {
          clear = clear && std::hypot(c.x - x, c.y - y) > c.radius + r + 2 * spec_.clump_radius + spec_.clump_gap;
        }
        if (clear) {
          crowns_.push_back({x, y, r});
          placed = true;
        }
      }
      if (!placed) throw Error(ErrorKind::SpecError, "cannot place tree " + std::to_string(t) + " inside the extent");
    }
  }

  void add(double x, double y, double z, Rgb color, ClassLabel label) {
    xyz_.insert(xyz_.end(), {x, y, z});
    rgb_.insert(rgb_.end(), {color.r, color.g, color.b});
    labels_.push_back(label);
  }

  static std::uint8_t channel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

  void sample_ground() {
    const double s = spec_.spacing;
    const auto nx = static_cast<int>(std::floor(spec_.extent_x / s));
    const auto ny = static_cast<int>(std::floor(spec_.extent_y / s));
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const double x = -half_x() + (i + uniform(0.0, 1.0)) * s;
        const double y = -half_y() + (j + uniform(0.0, 1.0)) * s;
        const double z = spec_.ground_noise > 0 ? uniform(-spec_.ground_noise, spec_.ground_noise) : 0.0;
        bool covered = false;
        for (const Box& b : boxes_) covered = covered || b.contains(x, y);
        if (covered) continue;
        const double base = uniform(110, 150);
        add(x, y, z, {channel(base + 10), channel(base), channel(base - uniform(0, 30))}, ClassLabel::Ground);
      }
    }
  }

  // Offset lo + at by up to half a step either way, kept inside [lo, hi].
  double jitter(double lo, double hi, double at, double step) {
    return std::clamp(lo + at + uniform(-0.5, 0.5) * step, lo, hi);
  }

  void sample_building(const Box& b) {
    const double s = spec_.spacing;
    const double roof = b.base + b.height;
    const double gray = uniform(110, 200);
    auto color = [&] {
      const double v = gray + uniform(-10, 10);
      return Rgb{channel(v), channel(v), channel(v + 5)};
    };
    const auto nx = std::max(1, static_cast<int>(std::round((b.x1 - b.x0) / s)));
    const auto ny = std::max(1, static_cast<int>(std::round((b.y1 - b.y0) / s)));
    const double sx = (b.x1 - b.x0) / nx, sy = (b.y1 - b.y0) / ny;
    for (int i = 0; i <= nx; ++i) {
      for (int j = 0; j <= ny; ++j) {
        add(jitter(b.x0, b.x1, i * sx, sx), jitter(b.y0, b.y1, j * sy, sy), roof + uniform(-0.02, 0.02), color(), ClassLabel::Building);
      }
    }
    const auto nz = std::max(1, static_cast<int>(std::round(b.height / s)));
    const double sz = b.height / nz;
    for (int k = 0; k < nz; ++k) {
      for (int i = 0; i < nx; ++i) {
        add(jitter(b.x0, b.x1, i * sx, sx), b.y0, jitter(b.base, roof, k * sz, sz), color(), ClassLabel::Building);
        add(jitter(b.x0, b.x1, (nx - i) * sx, sx), b.y1, jitter(b.base, roof, k * sz, sz), color(), ClassLabel::Building);
      }
      for (int j = 0; j < ny; ++j) {
        add(b.x1, jitter(b.y0, b.y1, j * sy, sy), jitter(b.base, roof, k * sz, sz), color(), ClassLabel::Building);
        add(b.x0, jitter(b.y0, b.y1, (ny - j) * sy, sy), jitter(b.base, roof, k * sz, sz), color(), ClassLabel::Building);
      }
    }
  }

  void sample_tree(const Crown& c) {
    const double rz = 0.8 * c.radius;
    const double center_z = uniform(2.0, 4.0) + rz;
    const double rho = spec_.clump_radius;
    const double min_sep = 2 * rho + spec_.clump_gap;
    std::vector<Eigen::Vector3d> clumps;
    for (int attempt = 0; attempt < 400; ++attempt) {
      const Eigen::Vector3d u(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      if (u.squaredNorm() > 1) continue;
      const Eigen::Vector3d p(c.x + c.radius * u.x(), c.y + c.radius * u.y(), center_z + rz * u.z());
      bool apart = true;
      for (const auto& q : clumps) apart = apart && (p - q).norm() >= min_sep;
      if (apart) clumps.push_back(p);
    }
    const auto n = static_cast<std::size_t>(std::round(4.0 * std::numbers::pi * rho * rho / (spec_.spacing * spec_.spacing)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& centre : clumps) {
      for (std::size_t k = 0; k < n; ++k) {
        Eigen::Vector3d u(gauss(rng_), gauss(rng_), gauss(rng_));
        u.normalize();
        const Eigen::Vector3d p = centre + rho * (1.0 + spec_.crown_jitter * uniform(-1.0, 1.0)) * u;
        const bool bluish = uniform(0.0, 1.0) < spec_.tree_blue_fraction;
        const double blue = bluish ? uniform(60, 90) : uniform(10, 50);
        add(p.x(), p.y(), p.z(), {channel(uniform(30, 80)), channel(uniform(90, 160)), channel(blue)}, ClassLabel::Tree);
      }
    }
  }

  const SceneSpec& spec_;
  std::mt19937_64 rng_;
  std::vector<Box> boxes_;
  std::vector<Crown> crowns_;
  std::vector<double> xyz_;
  std::vector<std::uint8_t> rgb_;
  std::vector<ClassLabel> labels_;
};

}  // namespace

SyntheticScene generate_synthetic_scene(const SceneSpec& spec) {
  spec.validate();
  return SceneBuilder(spec).build();
}

}  // namespace terrafuse
