#include "terrafuse/rulepipe.hpp"

#include <algorithm>
#include <sstream>

#include "terrafuse/core/components.hpp"
#include "terrafuse/core/error.hpp"
#include "terrafuse/core/spatial_index.hpp"

namespace terrafuse {

void RuleConfig::validate() const {
  if (blue_max < 0 || blue_max > 256) throw Error(ErrorKind::ConfigError, "blue_max outside [0, 256]");
  if (verticality_max < 0 || verticality_max > 1) throw Error(ErrorKind::ConfigError, "verticality_max outside [0, 1]");
  if (roughness_max < 0 || roughness_max > 1) throw Error(ErrorKind::ConfigError, "roughness_max outside [0, 1]");
  if (density_min < 1 || cc_min_points < 1) throw Error(ErrorKind::ConfigError, "counts must be at least 1");
  if (!(density_radius > 0) || !(cc_link > 0) || !(expand_radius_2d > 0)) {
    throw Error(ErrorKind::ConfigError, "radii must be positive");
  }
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Blue: return "blue";
    case Stage::Verticality: return "verticality";
    case Stage::Roughness: return "roughness";
    case Stage::Density: return "density";
    case Stage::Components: return "components";
  }
  return "unknown";
}

bool StageTrace::telescopes(std::size_t initial) const {
  std::size_t expected = initial;
  for (const auto& s : stages) {
    if (s.input != expected || s.input != s.removed + s.output()) return false;
    expected = s.output();
  }
  return true;
}

std::string StageTrace::to_text() const {
  std::ostringstream out;
  out << "stage in removed out\n";
  for (const auto& s : stages) out << s.name << ' ' << s.input << ' ' << s.removed << ' ' << s.output() << '\n';
  return out.str();
}

namespace {

bool is_prefix_chain(std::span<const Stage> stages) {
  if (stages.size() > std::size(kAllStages)) return false;
  return std::equal(stages.begin(), stages.end(), std::begin(kAllStages));
}

}  // namespace

RoofExtraction extract_roofs(const PointCloud& non_ground, const RuleConfig& config, std::span<const Stage> stages,
                             const FeatureParams& params) {
  if (non_ground.empty()) throw Error(ErrorKind::EmptyCloud, "no non-ground points");
  config.validate();
  params.validate();
  if (!is_prefix_chain(stages)) {
    throw Error(ErrorKind::InvalidArgument, "stages must be a prefix of blue, verticality, roughness, density, components");
  }

  RoofExtraction result;
  IdSet current = all_ids(non_ground.size());
  FeatureSet features;  // indexed like `current` at the time it was computed

  auto record = [&](Stage s, IdSet next) {
    StageRecord rec;
    rec.name = stage_name(s);
    rec.input = current.size();
    rec.removed = current.size() - next.size();
    rec.surviving = next;
    result.trace.stages.push_back(std::move(rec));
    current = std::move(next);
  };

  for (const Stage stage : stages) {
    if (current.empty()) {
      record(stage, {});
      continue;
    }
    IdSet next;
    switch (stage) {
      case Stage::Blue:
        for (Index id : current) {
          if (survives_blue(non_ground.color(id).b, config)) next.push_back(id);
        }
        break;
      case Stage::Verticality: {
        features = compute_features(non_ground.subset(current), params);
        FeatureSet kept;
        for (std::size_t k = 0; k < current.size(); ++k) {
          if (survives_verticality(features[k], config)) {
            next.push_back(current[k]);
            kept.push_back(features[k]);
          }
        }
        features = std::move(kept);
        break;
      }
      case Stage::Roughness: {
        FeatureSet kept;
        for (std::size_t k = 0; k < current.size(); ++k) {
          if (survives_roughness(features[k], config)) {
            next.push_back(current[k]);
            kept.push_back(features[k]);
          }
        }
        features = std::move(kept);
        break;
      }
      case Stage::Density: {
        const PointCloud survivors = non_ground.subset(current);
        const SpatialIndex index(survivors);
        for (std::size_t k = 0; k < current.size(); ++k) {
          if (survives_density(index.count_neighbors(k, config.density_radius, Dims::Three), config)) {
            next.push_back(current[k]);
          }
        }
        break;
      }
      case Stage::Components: {
        const auto cc = connected_components(non_ground, current, config.cc_link, config.cc_min_points);
        next = cc.surviving;
        break;
      }
    }
    record(stage, std::move(next));
    if (current.empty()) {
      result.warnings.push_back(std::string("EmptyResult: stage '") + stage_name(stage) + "' removed every point");
    }
  }
  result.roofs = current;
  return result;
}

IdSet expand_buildings(const PointCloud& cloud, const IdSet& roof_ids, double expand_radius_2d) {
  if (roof_ids.empty()) throw Error(ErrorKind::EmptyRoofSet, "no roof points to expand");
  if (!(expand_radius_2d > 0)) throw Error(ErrorKind::InvalidArgument, "expansion radius must be positive");
  if (roof_ids.back() >= cloud.size()) throw Error(ErrorKind::InvalidArgument, "roof id outside cloud");
  const SpatialIndex index(cloud);
  std::vector<char> building(cloud.size(), 0);
  for (Index q : roof_ids) building[q] = 1;
  for (Index q : roof_ids) {
    const double roof_z = cloud.position(q).z();
    for (Index p : index.radius_neighbors(q, expand_radius_2d, Dims::Two)) {
      if (cloud.position(p).z() < roof_z) building[p] = 1;
    }
  }
  IdSet out;
  for (Index i = 0; i < cloud.size(); ++i) {
    if (building[i]) out.push_back(i);
  }
  return out;
}

AnnotationResult annotate(const PointCloud& cloud, const IdSet& ground_ids, const RuleConfig& config,
                          const FeatureParams& params) {
  if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "annotate on empty cloud");
  if (!ground_ids.empty() && ground_ids.back() >= cloud.size()) {
    throw Error(ErrorKind::InvalidArgument, "ground id outside cloud");
  }
  AnnotationResult result;
  result.labeled = cloud;
  std::vector<ClassLabel> labels(cloud.size(), ClassLabel::Tree);
  for (Index g : ground_ids) labels[g] = ClassLabel::Ground;

  const IdSet non_ground_ids = complement(ground_ids, cloud.size());
  if (!non_ground_ids.empty()) {
    const PointCloud non_ground = cloud.subset(non_ground_ids);
    RoofExtraction roofs = extract_roofs(non_ground, config, kAllStages, params);
    result.trace = std::move(roofs.trace);
    result.warnings = std::move(roofs.warnings);
    if (roofs.roofs.empty()) {
      result.warnings.push_back("no roof points found; all non-ground points labeled tree");
    } else {
      for (Index local : expand_buildings(non_ground, roofs.roofs, config.expand_radius_2d)) {
        labels[non_ground_ids[local]] = ClassLabel::Building;
      }
    }
  }
  result.labeled.labels = std::move(labels);
  return result;
}

}  // namespace terrafuse
