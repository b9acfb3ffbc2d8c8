#include "terrafuse/core/io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line_no) {
  double v = 0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad real '" + std::string(tok) + "'");
  }
  return v;
}

int parse_int(std::string_view tok, std::size_t line_no, int lo, int hi) {
  // Integral values written as reals ("255.0") are accepted.
  const double v = parse_real(tok, line_no);
  if (v != std::floor(v) || v < lo || v > hi) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": value '" + std::string(tok) +
                                           "' outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

ClassLabel parse_label(std::string_view tok, std::size_t line_no) {
  return *label_from_code(parse_int(tok, line_no, 0, 3));
}

struct GeoHeader {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  std::string crs = "local";
};

GeoHeader parse_geo(const std::vector<std::string_view>& toks, std::size_t first, std::size_t line_no) {
  if (toks.size() != first + 4) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": geo origin needs 'x y z crs_tag'");
  }
  GeoHeader g;
  for (int k = 0; k < 3; ++k) g.origin(k) = parse_real(toks[first + static_cast<std::size_t>(k)], line_no);
  g.crs = std::string(toks[first + 3]);
  return g;
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
  bool has_list = false;
};

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

CloudFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".ply" ? CloudFormat::PlyAscii : CloudFormat::XyzRgbText;
}

PointCloud read_ply_ascii(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    throw Error(ErrorKind::ParseError, "missing 'ply' magic");
  }
  GeoHeader geo;
  std::vector<PlyElement> elements;
  bool have_format = false;
  while (true) {
    if (!next_line()) throw Error(ErrorKind::ParseError, "header not terminated by end_header");
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "end_header") break;
    if (toks[0] == "format") {
      if (toks.size() < 2 || toks[1] != "ascii") throw Error(ErrorKind::ParseError, "only 'format ascii 1.0' is supported");
      have_format = true;
    } else if (toks[0] == "comment" || toks[0] == "obj_info") {
      if (toks.size() >= 2 && toks[1] == "geo_origin") geo = parse_geo(toks, 2, line_no);
    } else if (toks[0] == "element") {
      if (toks.size() != 3) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad element");
      PlyElement e;
      e.name = std::string(toks[1]);
      e.count = static_cast<std::size_t>(parse_int(toks[2], line_no, 0, std::numeric_limits<int>::max()));
      elements.push_back(std::move(e));
    } else if (toks[0] == "property") {
      if (elements.empty() || toks.size() < 3) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": property outside element");
      }
      if (toks[1] == "list") elements.back().has_list = true;
      elements.back().properties.emplace_back(toks.back());
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unknown header keyword");
    }
  }
  if (!have_format) throw Error(ErrorKind::ParseError, "missing format line");

  PointCloud cloud;
  cloud.geo_origin = geo.origin;
  cloud.crs_tag = geo.crs;
  bool found_vertex = false;
  for (const PlyElement& e : elements) {
    if (e.name != "vertex") {
      for (std::size_t i = 0; i < e.count; ++i) {
        if (!next_line()) throw Error(ErrorKind::ParseError, "truncated element '" + e.name + "'");
      }
      continue;
    }
    found_vertex = true;
    auto column = [&](std::initializer_list<const char*> names) -> int {
      for (const char* n : names) {
        for (std::size_t k = 0; k < e.properties.size(); ++k) {
          if (e.properties[k] == n) return static_cast<int>(k);
        }
      }
      return -1;
    };
    const std::array<int, 3> xyz{column({"x"}), column({"y"}), column({"z"})};
    const std::array<int, 3> rgb{column({"red", "r"}), column({"green", "g"}), column({"blue", "b"})};
    const int label_col = column({"label"});
    for (int c : xyz) {
      if (c < 0) throw Error(ErrorKind::MissingProperty, "vertex element lacks x/y/z");
    }
    for (int c : rgb) {
      if (c < 0) throw Error(ErrorKind::MissingProperty, "vertex element lacks red/green/blue");
    }
    if (e.has_list) throw Error(ErrorKind::ParseError, "list properties on vertices are not supported");

    cloud.positions.resize(3, static_cast<Eigen::Index>(e.count));
    cloud.colors.resize(3, static_cast<Eigen::Index>(e.count));
    if (label_col >= 0) cloud.labels.emplace(e.count, ClassLabel::Unlabeled);
    for (std::size_t i = 0; i < e.count; ++i) {
      if (!next_line()) throw Error(ErrorKind::ParseError, "expected " + std::to_string(e.count) + " vertices");
      const auto toks = split_ws(line);
      if (toks.size() != e.properties.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(e.properties.size()) + " values");
      }
      const auto col = static_cast<Eigen::Index>(i);
      for (int k = 0; k < 3; ++k) {
        cloud.positions(k, col) = parse_real(toks[static_cast<std::size_t>(xyz[static_cast<std::size_t>(k)])], line_no);
        cloud.colors(k, col) = static_cast<std::uint8_t>(
            parse_int(toks[static_cast<std::size_t>(rgb[static_cast<std::size_t>(k)])], line_no, 0, 255));
      }
      if (label_col >= 0) (*cloud.labels)[i] = parse_label(toks[static_cast<std::size_t>(label_col)], line_no);
    }
  }
  if (!found_vertex) throw Error(ErrorKind::MissingProperty, "no vertex element");
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "zero vertices");
  return cloud;
}

void write_ply_ascii(const PointCloud& cloud, std::ostream& out) {
  out << "ply\nformat ascii 1.0\n";
  out << "comment geo_origin " << format_real(cloud.geo_origin.x()) << ' ' << format_real(cloud.geo_origin.y()) << ' '
      << format_real(cloud.geo_origin.z()) << ' ' << cloud.crs_tag << '\n';
  out << "element vertex " << cloud.size() << '\n';
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (cloud.labels) out << "property uchar label\n";
  out << "end_header\n";
  for (Index i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.position(i);
    const Rgb c = cloud.color(i);
    out << format_real(p.x()) << ' ' << format_real(p.y()) << ' ' << format_real(p.z()) << ' ' << int{c.r} << ' '
        << int{c.g} << ' ' << int{c.b};
    if (cloud.labels) out << ' ' << static_cast<int>((*cloud.labels)[i]);
    out << '\n';
  }
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p.replace_extension(".origin");
  return p;
}

PointCloud read_xyzrgb(std::istream& in) {
  PointCloud cloud;
  std::vector<double> xyz;
  std::vector<std::uint8_t> rgb;
  std::vector<ClassLabel> labels;
  std::optional<bool> has_label;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks.size() != 6 && toks.size() != 7) {
      if (toks.size() >= 3 && toks.size() < 6) throw Error(ErrorKind::MissingProperty, "line " + std::to_string(line_no) + ": missing r g b");
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'x y z r g b [label]'");
    }
    const bool labelled = toks.size() == 7;
    if (has_label && *has_label != labelled) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": inconsistent label column");
    }
    has_label = labelled;
    for (int k = 0; k < 3; ++k) xyz.push_back(parse_real(toks[static_cast<std::size_t>(k)], line_no));
    for (int k = 3; k < 6; ++k) rgb.push_back(static_cast<std::uint8_t>(parse_int(toks[static_cast<std::size_t>(k)], line_no, 0, 255)));
    if (labelled) labels.push_back(parse_label(toks[6], line_no));
  }
  if (xyz.empty()) throw Error(ErrorKind::EmptyCloud, "zero points");
  const auto n = static_cast<Eigen::Index>(xyz.size() / 3);
  cloud.positions = Eigen::Map<const Eigen::Matrix3Xd>(xyz.data(), 3, n);
  cloud.colors = Eigen::Map<const Matrix3Xu8>(rgb.data(), 3, n);
  if (has_label.value_or(false)) cloud.labels = std::move(labels);
  return cloud;
}

}  // namespace

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  if (format == CloudFormat::PlyAscii) return read_ply_ascii(in);

  PointCloud cloud = read_xyzrgb(in);
  if (std::ifstream side(sidecar_path(path)); side) {
    std::string line;
    std::getline(side, line);
    const auto geo = parse_geo(split_ws(line), 0, 1);
    cloud.geo_origin = geo.origin;
    cloud.crs_tag = geo.crs;
  }
  return cloud;
}

PointCloud load_point_cloud(const std::filesystem::path& path) { return load_point_cloud(path, format_from_path(path)); }

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "refusing to save an empty cloud");
  cloud.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  if (format == CloudFormat::PlyAscii) {
    write_ply_ascii(cloud, out);
  } else {
    for (Index i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.position(i);
      const Rgb c = cloud.color(i);
      out << format_real(p.x()) << ' ' << format_real(p.y()) << ' ' << format_real(p.z()) << ' ' << int{c.r} << ' '
          << int{c.g} << ' ' << int{c.b};
      if (cloud.labels) out << ' ' << static_cast<int>((*cloud.labels)[i]);
      out << '\n';
    }
    std::ofstream side(sidecar_path(path), std::ios::binary);
    if (!side) throw Error(ErrorKind::IoError, "cannot write " + sidecar_path(path).string());
    side << format_real(cloud.geo_origin.x()) << ' ' << format_real(cloud.geo_origin.y()) << ' '
         << format_real(cloud.geo_origin.z()) << ' ' << cloud.crs_tag << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  save_point_cloud(cloud, path, format_from_path(path));
}

}  // namespace terrafuse
