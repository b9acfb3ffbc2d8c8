#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "terrafuse/core/point_cloud.hpp"

namespace testing {

using terrafuse::PointCloud;

inline PointCloud make_cloud(const std::vector<oracle::Vec3>& pts, terrafuse::Rgb color = {128, 128, 128}) {
  PointCloud c;
  c.positions.resize(3, static_cast<Eigen::Index>(pts.size()));
  c.colors.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    c.positions.col(k) << pts[i][0], pts[i][1], pts[i][2];
    c.colors.col(k) << color.r, color.g, color.b;
  }
  return c;
}

inline std::vector<oracle::Vec3> to_vec(const PointCloud& c) {
  std::vector<oracle::Vec3> out;
  for (Eigen::Index i = 0; i < c.positions.cols(); ++i) out.push_back({c.positions(0, i), c.positions(1, i), c.positions(2, i)});
  return out;
}

inline std::vector<oracle::Vec3> uniform_points(std::size_t n, double extent, std::uint64_t seed, double z_extent = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::uniform_real_distribution<double> uz(0.0, z_extent < 0 ? extent : z_extent);
  std::vector<oracle::Vec3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), uz(rng)};
  return pts;
}

/// Square lattice of side n at the given spacing, on z = 0, origin at (x0, y0).
inline std::vector<oracle::Vec3> lattice(int n, double spacing, double x0 = 0, double y0 = 0, double z = 0) {
  std::vector<oracle::Vec3> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pts.push_back({x0 + i * spacing, y0 + j * spacing, z});
  return pts;
}

/// Vertical wall in the x-z plane at y = y0.
inline std::vector<oracle::Vec3> wall(int nx, int nz, double spacing, double x0 = 0, double y0 = 0) {
  std::vector<oracle::Vec3> pts;
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k) pts.push_back({x0 + i * spacing, y0, k * spacing});
  return pts;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("terrafuse_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
