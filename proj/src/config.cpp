#include "terrafuse/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

namespace {

using Json = nlohmann::ordered_json;

/// Binds JSON keys to struct fields in one place so reading and dumping
/// cannot drift apart.
class Section {
 public:
  template <typename T>
  Section& field(const std::string& key, T& value) {
    readers_[key] = [&value, key](const Json& j) {
      try {
        if constexpr (std::is_same_v<T, bool>) {
          if (!j.is_boolean()) throw Error(ErrorKind::ConfigError, "'" + key + "' must be a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (!j.is_string() || j.get<std::string>().empty()) {
            throw Error(ErrorKind::ConfigError, "'" + key + "' must be a non-empty string");
          }
        } else if constexpr (std::is_integral_v<T>) {
          if (!j.is_number_integer()) throw Error(ErrorKind::ConfigError, "'" + key + "' must be an integer");
          if (std::is_unsigned_v<T> && j.get<long long>() < 0) {
            throw Error(ErrorKind::ConfigError, "'" + key + "' must be non-negative");
          }
        } else {
          if (!j.is_number()) throw Error(ErrorKind::ConfigError, "'" + key + "' must be a number");
        }
        value = j.get<T>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ConfigError, "'" + key + "': " + e.what());
      }
    };
    writers_.emplace_back([&value, key](Json& j) { j[key] = value; });
    return *this;
  }

  Section& section(const std::string& key, Section& child) {
    readers_[key] = [&child, key](const Json& j) { child.read(j, key); };
    writers_.emplace_back([&child, key](Json& j) { j[key] = child.write(); });
    return *this;
  }

  void read(const Json& j, const std::string& where) const {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "'" + where + "' must be an object");
    for (const auto& [key, value] : j.items()) {
      const auto it = readers_.find(key);
      if (it == readers_.end()) throw Error(ErrorKind::ConfigError, "unknown key '" + where + "." + key + "'");
      it->second(value);
    }
  }

  Json write() const {
    Json j = Json::object();
    for (const auto& w : writers_) w(j);
    return j;
  }

 private:
  std::map<std::string, std::function<void(const Json&)>> readers_;
  std::vector<std::function<void(Json&)>> writers_;
};

Section& bind_icp(Section& s, IcpParams& p) {
  return s.field("max_iterations", p.max_iterations)
      .field("convergence_delta", p.convergence_delta)
      .field("max_correspondence_dist", p.max_correspondence_dist)
      .field("subsample_cell", p.subsample_cell);
}

/// Owns the section tree for one config instance.
struct Schema {
  Section root, rules, features, ground, smooth, fusion, pass1, pass2, ground_pass, stages;

  explicit Schema(PipelineConfig& c) {
    rules.field("blue_max", c.rules.blue_max)
        .field("verticality_max", c.rules.verticality_max)
        .field("roughness_max", c.rules.roughness_max)
        .field("density_min", c.rules.density_min)
        .field("density_radius", c.rules.density_radius)
        .field("cc_link", c.rules.cc_link)
        .field("cc_min_points", c.rules.cc_min_points)
        .field("expand_radius_2d", c.rules.expand_radius_2d);
    features.field("feature_radius", c.features.feature_radius)
        .field("density_radius", c.features.density_radius)
        .field("min_neighbors", c.features.min_neighbors)
        .field("roughness_cap", c.features.roughness_cap);
    ground.field("grid_cell", c.ground.grid_cell)
        .field("height_tol", c.ground.height_tol)
        .field("slope_tol", c.ground.slope_tol);
    smooth.field("radius", c.smooth.radius)
        .field("iterations", c.smooth.iterations)
        .field("color_tol", c.smooth.color_tol)
        .field("clean_radius", c.smooth.clean_radius);
    bind_icp(pass1, c.fusion.pass1);
    bind_icp(pass2, c.fusion.pass2);
    bind_icp(ground_pass, c.fusion.ground_pass);
    fusion.section("pass1", pass1)
        .section("pass2", pass2)
        .section("ground_pass", ground_pass)
        .field("footprint_cell", c.fusion.footprint_cell)
        .field("boundary_buffer", c.fusion.boundary_buffer)
        .field("border_width", c.fusion.border_width)
        .field("semantic", c.fusion.semantic)
        .field("precrop_pass1", c.fusion.precrop_pass1);
    stages.field("ground_postprocess", c.stages.ground_postprocess)
        .field("ground_link", c.stages.ground_link)
        .field("ground_min_component", c.stages.ground_min_component)
        .field("smooth", c.stages.smooth)
        .field("clean_buildings", c.stages.clean_buildings);
    root.section("rules", rules)
        .section("features", features)
        .section("ground", ground)
        .section("smooth", smooth)
        .section("fusion", fusion)
        .section("stages", stages);
  }
};

struct SceneSchema {
  Section root;
  explicit SceneSchema(SceneSpec& s) {
    root.field("extent_x", s.extent_x)
        .field("extent_y", s.extent_y)
        .field("spacing", s.spacing)
        .field("ground_noise", s.ground_noise)
        .field("building_count", s.building_count)
        .field("footprint_min", s.footprint_min)
        .field("footprint_max", s.footprint_max)
        .field("height_min", s.height_min)
        .field("height_max", s.height_max)
        .field("tree_count", s.tree_count)
        .field("crown_radius_min", s.crown_radius_min)
        .field("crown_radius_max", s.crown_radius_max)
        .field("clump_radius", s.clump_radius)
        .field("clump_gap", s.clump_gap)
        .field("crown_jitter", s.crown_jitter)
        .field("tree_blue_fraction", s.tree_blue_fraction)
        .field("clearance", s.clearance)
        .field("bowl_depth", s.bowl_depth)
        .field("crs_tag", s.crs_tag)
        .field("seed", s.seed);
  }
};

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  rules.validate();
  features.validate();
  ground.validate();
  smooth.validate();
  fusion.validate();
  if (!(stages.ground_link > 0) || stages.ground_min_component < 1) {
    throw Error(ErrorKind::ConfigError, "ground post-processing needs a positive link and min component");
  }
}

PipelineConfig parse_config(const std::string& json_text) {
  PipelineConfig config;
  const Json j = parse_json(json_text);
  Schema schema(config);
  schema.root.read(j, "config");
  config.fusion.ground = config.ground;
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const PipelineConfig& config) {
  PipelineConfig copy = config;
  Schema schema(copy);
  return schema.root.write().dump(2) + "\n";
}

SceneSpec parse_scene_spec(const std::string& json_text) {
  SceneSpec spec;
  Json j = parse_json(json_text);
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "scene spec must be an object");
  if (j.contains("geo_origin")) {
    const Json& g = j["geo_origin"];
    if (!g.is_array() || g.size() != 3 || !g[0].is_number() || !g[1].is_number() || !g[2].is_number()) {
      throw Error(ErrorKind::ConfigError, "'geo_origin' must be [x, y, z]");
    }
    spec.geo_origin = Eigen::Vector3d(g[0].get<double>(), g[1].get<double>(), g[2].get<double>());
    j.erase("geo_origin");
  }
  SceneSchema schema(spec);
  schema.root.read(j, "scene");
  spec.validate();
  return spec;
}

std::string scene_spec_to_json(const SceneSpec& spec) {
  SceneSpec copy = spec;
  SceneSchema schema(copy);
  Json j = schema.root.write();
  j["geo_origin"] = {spec.geo_origin.x(), spec.geo_origin.y(), spec.geo_origin.z()};
  return j.dump(2) + "\n";
}

}  // namespace terrafuse
