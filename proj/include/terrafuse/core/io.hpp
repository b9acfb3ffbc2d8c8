#pragma once

#include <filesystem>
#include <iosfwd>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

enum class CloudFormat { PlyAscii, XyzRgbText };

/// ".ply" maps to ply-ascii; everything else is xyzrgb text.
CloudFormat format_from_path(const std::filesystem::path& path);

/// Throws IoError, ParseError, MissingProperty, EmptyCloud.
PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_point_cloud(const std::filesystem::path& path);

PointCloud read_ply_ascii(std::istream& in);
void write_ply_ascii(const PointCloud& cloud, std::ostream& out);

/// Throws EmptyCloud, IoError. The xyzrgb format writes a "<stem>.origin"
/// sidecar next to the file.
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

}  // namespace terrafuse
