#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "terrafuse/core/point_cloud.hpp"
#include "terrafuse/features.hpp"

namespace terrafuse {

/// Thresholds of the roof-extraction chain. Every comparison is strict: a
/// value sitting exactly on a threshold survives.
struct RuleConfig {
  int blue_max = 60;               // remove blue < blue_max
  double verticality_max = 0.5;    // remove verticality > verticality_max
  double roughness_max = 0.3;      // remove roughness > roughness_max
  std::size_t density_min = 60;    // remove neighbour count < density_min
  double density_radius = 3.0;
  double cc_link = 1.0;
  std::size_t cc_min_points = 100; // remove components smaller than this
  double expand_radius_2d = 3.0;

  /// Throws ConfigError.
  void validate() const;
};

enum class Stage { Blue, Verticality, Roughness, Density, Components };

inline constexpr Stage kAllStages[] = {Stage::Blue, Stage::Verticality, Stage::Roughness, Stage::Density,
                                       Stage::Components};

const char* stage_name(Stage s);

inline bool survives_blue(std::uint8_t blue, const RuleConfig& c) { return blue >= c.blue_max; }
inline bool survives_verticality(const FeatureRecord& f, const RuleConfig& c) {
  return f.valid && !(f.verticality > c.verticality_max);
}
inline bool survives_roughness(const FeatureRecord& f, const RuleConfig& c) { return !(f.roughness > c.roughness_max); }
inline bool survives_density(std::size_t neighbours, const RuleConfig& c) { return neighbours >= c.density_min; }
inline bool survives_component(std::size_t component_size, const RuleConfig& c) {
  return component_size >= c.cc_min_points;
}

struct StageRecord {
  std::string name;
  std::size_t input = 0;
  std::size_t removed = 0;
  IdSet surviving;

  std::size_t output() const { return surviving.size(); }
};

struct StageTrace {
  std::vector<StageRecord> stages;

  /// Each stage consumes exactly what the previous one kept.
  bool telescopes(std::size_t initial) const;
  /// One line per stage: "name in removed out".
  std::string to_text() const;
};

struct RoofExtraction {
  IdSet roofs;
  StageTrace trace;
  std::vector<std::string> warnings;
};

/// Runs the given stage prefix over `non_ground`; ids refer to that cloud.
/// Throws EmptyCloud; an emptied stage yields a warning and an empty roof set.
RoofExtraction extract_roofs(const PointCloud& non_ground, const RuleConfig& config, std::span<const Stage> stages,
                             const FeatureParams& params);

/// roofs plus every point within expand_radius_2d (x-y) of some roof point and
/// strictly below it. Single pass. Throws EmptyRoofSet.
IdSet expand_buildings(const PointCloud& cloud, const IdSet& roof_ids, double expand_radius_2d);

struct AnnotationResult {
  PointCloud labeled;
  StageTrace trace;
  std::vector<std::string> warnings;
};

/// Ground for ground_ids, Building for the expanded roofs among the rest, Tree
/// for everything else.
AnnotationResult annotate(const PointCloud& cloud, const IdSet& ground_ids, const RuleConfig& config,
                          const FeatureParams& params);

}  // namespace terrafuse
