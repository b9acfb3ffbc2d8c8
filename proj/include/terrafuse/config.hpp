#pragma once

#include <filesystem>
#include <string>

#include "terrafuse/features.hpp"
#include "terrafuse/fusion.hpp"
#include "terrafuse/rulepipe.hpp"
#include "terrafuse/segment.hpp"
#include "terrafuse/synthetic.hpp"

namespace terrafuse {

struct StageFlags {
  bool ground_postprocess = true;
  double ground_link = 1.0;
  std::size_t ground_min_component = 100;
  bool smooth = false;
  bool clean_buildings = false;
};

/// Everything the command-line pipeline can be tuned with. Every key is
/// optional in the JSON document; missing keys keep these defaults.
struct PipelineConfig {
  RuleConfig rules;
  FeatureParams features;
  GroundParams ground;
  SmoothParams smooth;
  FusionConfig fusion;
  StageFlags stages;

  /// Throws ConfigError on any invariant violation.
  void validate() const;
};

/// Overlays the keys present in `json_text` onto the defaults. Unknown keys and
/// ill-typed values raise ConfigError.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Effective configuration as pretty-printed JSON with every key present.
std::string config_to_json(const PipelineConfig& config);

}  // namespace terrafuse

namespace terrafuse {

/// SceneSpec from JSON; same overlay and unknown-key rules as the pipeline
/// config. "geo_origin" is a 3-element array.
SceneSpec parse_scene_spec(const std::string& json_text);
std::string scene_spec_to_json(const SceneSpec& spec);

}  // namespace terrafuse
