#include "terrafuse/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "terrafuse/config.hpp"
#include "terrafuse/core/error.hpp"
#include "terrafuse/core/io.hpp"
#include "terrafuse/metrics.hpp"

namespace terrafuse {

namespace fs = std::filesystem;

namespace {

/// A processing failure tagged with the pipeline stage it came from.
struct StageFailure {
  std::string stage;
  std::string message;
};

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageFailure{stage, e.what()};
  } catch (const std::exception& e) {
    throw StageFailure{stage, e.what()};
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

PipelineConfig effective_config(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

int cmd_features(const std::string& input, const std::string& output, const PipelineConfig& config, std::ostream& out) {
  const PointCloud cloud = in_stage("load", [&] { return load_point_cloud(input); });
  const FeatureSet features = in_stage("features", [&] { return compute_features(cloud, config.features); });
  in_stage("write", [&] {
    if (output.empty()) {
      write_feature_dump(features, out);
    } else {
      std::ostringstream text;
      write_feature_dump(features, text);
      write_text(output, text.str());
    }
  });
  return 0;
}

int cmd_annotate(const std::string& input, std::string output, const std::string& ground_mode,
                 const PipelineConfig& config, std::ostream& out) {
  const PointCloud cloud = in_stage("load", [&] { return load_point_cloud(input); });
  if (output.empty()) output = (fs::path(input).parent_path() / (fs::path(input).stem().string() + "_labeled.ply")).string();

  const bool from_file = ground_mode == "from-file" || (ground_mode.empty() && cloud.labels.has_value());
  IdSet ground = in_stage("ground", [&] {
    if (from_file) {
      if (!cloud.labels) throw Error(ErrorKind::MissingProperty, "--ground-labels from-file needs a label property");
      return ids_with_label(*cloud.labels, ClassLabel::Ground);
    }
    return extract_ground(cloud, config.ground);
  });
  if (config.stages.ground_postprocess) {
    ground = in_stage("ground_postprocess", [&] {
      return ground_postprocess(cloud, ground, config.stages.ground_link, config.stages.ground_min_component).kept;
    });
  }

  PointCloud unlabeled = cloud;
  unlabeled.labels.reset();
  AnnotationResult result = in_stage("annotate", [&] { return annotate(unlabeled, ground, config.rules, config.features); });
  if (config.stages.smooth) {
    result.labeled.labels =
        in_stage("smooth", [&] { return smooth_labels(result.labeled, *result.labeled.labels, config.smooth).labels; });
  }
  if (config.stages.clean_buildings) {
    result.labeled.labels =
        in_stage("clean_buildings", [&] { return clean_building_points(result.labeled, *result.labeled.labels, config.smooth); });
  }

  in_stage("write", [&] {
    save_point_cloud(result.labeled, output);
    write_text(output + ".trace.txt", result.trace.to_text());
  });
  const auto& labels = *result.labeled.labels;
  out << "ground " << ids_with_label(labels, ClassLabel::Ground).size() << '\n'
      << "building " << ids_with_label(labels, ClassLabel::Building).size() << '\n'
      << "tree " << ids_with_label(labels, ClassLabel::Tree).size() << '\n'
      << result.trace.to_text();
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, const std::string& json_path,
                 std::ostream& out) {
  const PointCloud pred = in_stage("load", [&] { return load_point_cloud(pred_path); });
  const PointCloud truth = in_stage("load", [&] { return load_point_cloud(truth_path); });
  const MetricsReport report = in_stage("evaluate", [&] {
    if (!pred.labels || !truth.labels) throw Error(ErrorKind::MissingProperty, "both clouds need a label property");
    return make_report(confusion_matrix(*pred.labels, *truth.labels));
  });
  out << render_report(report);
  if (report.unlabeled > 0) out << "unlabeled points excluded: " << report.unlabeled << '\n';
  if (!json_path.empty()) in_stage("write", [&] { write_text(json_path, report_to_json(report)); });
  return 0;
}

int cmd_fuse(const std::string& uav_path, const std::string& bing_path, const std::string& dir, bool no_semantic,
             PipelineConfig config, std::ostream& out) {
  const PointCloud uav = in_stage("load", [&] { return load_point_cloud(uav_path); });
  const PointCloud bing = in_stage("load", [&] { return load_point_cloud(bing_path); });
  if (no_semantic) config.fusion.semantic = false;
  std::optional<GroundLabels> labels;
  if (uav.labels && bing.labels) {
    labels = GroundLabels{ids_with_label(*uav.labels, ClassLabel::Ground), ids_with_label(*bing.labels, ClassLabel::Ground)};
  }
  const FusionResult result = in_stage("fuse", [&] { return fuse(uav, bing, labels, config.fusion); });
  in_stage("write", [&] {
    fs::create_directories(dir);
    std::ostringstream t;
    write_transform(result.final_transform, t);
    write_text(fs::path(dir) / "transform.txt", t.str());
    write_text(fs::path(dir) / "diagnostics.json", diagnostics_to_json(result));
    if (!result.trimmed_bing.empty()) save_point_cloud(result.trimmed_bing, fs::path(dir) / "bing_trimmed.ply");
    save_point_cloud(result.aligned_uav, fs::path(dir) / "uav_aligned.ply");
  });
  write_transform(result.final_transform, out);
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& output, std::ostream& out) {
  const SceneSpec spec = in_stage("spec", [&] {
    std::ifstream in(spec_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + spec_path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scene_spec(text.str());
  });
  const SyntheticScene scene = in_stage("synth", [&] { return generate_synthetic_scene(spec); });
  in_stage("write", [&] { save_point_cloud(scene.cloud, output); });
  out << "points " << scene.cloud.size() << "\nbuildings " << scene.buildings << "\ntrees " << scene.trees << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule-based point-cloud annotation, evaluation and UAV/Bing data fusion", "terrafuse"};
  app.require_subcommand(0, 1);

  std::string top_config;
  bool print_config = false;
  app.add_option("--config", top_config, "Pipeline config (JSON)");
  app.add_flag("--print-config", print_config, "Print the effective config and exit");

  std::string in1, in2, output, config_path, ground_mode, json_path;
  std::string fuse_dir = "fusion_out";
  bool no_semantic = false;

  auto* features = app.add_subcommand("features", "Compute per-point features");
  features->add_option("input", in1, "Input cloud")->required();
  features->add_option("-o,--output", output, "Feature dump (default: stdout)");
  features->add_option("--config", config_path, "Pipeline config (JSON)");

  auto* annotate_cmd = app.add_subcommand("annotate", "Rule-based ground/building/tree annotation");
  annotate_cmd->add_option("input", in1, "Input cloud")->required();
  annotate_cmd->add_option("-o,--output", output, "Labelled output cloud");
  annotate_cmd->add_option("--config", config_path, "Pipeline config (JSON)");
  annotate_cmd->add_option("--ground-labels", ground_mode, "Ground source")->check(CLI::IsMember({"from-file", "auto"}));

  auto* evaluate = app.add_subcommand("evaluate", "Compare a labelled cloud against truth");
  evaluate->add_option("pred", in1, "Predicted labels")->required();
  evaluate->add_option("truth", in2, "Truth labels")->required();
  evaluate->add_option("--json", json_path, "Also write the report as JSON");

  auto* fuse_cmd = app.add_subcommand("fuse", "Register a UAV cloud into a Bing cloud");
  fuse_cmd->add_option("uav", in1, "UAV cloud")->required();
  fuse_cmd->add_option("bing", in2, "Bing cloud")->required();
  fuse_cmd->add_option("-o,--output", fuse_dir, "Output directory")->capture_default_str();
  fuse_cmd->add_option("--config", config_path, "Pipeline config (JSON)");
  fuse_cmd->add_flag("--no-semantic", no_semantic, "Skip the ground-border refinement");

  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic scene");
  synth->add_option("spec", in1, "Scene spec (JSON)")->required();
  synth->add_option("-o,--output", output, "Output cloud")->required();

  std::vector<std::string> argv_rest(args);
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const std::string& cfg_path = config_path.empty() ? top_config : config_path;
    const PipelineConfig config = in_stage("config", [&] { return effective_config(cfg_path); });
    if (print_config) {
      out << config_to_json(config);
      return 0;
    }
    if (app.get_subcommands().empty()) {
      err << "error: a subcommand is required\n\n" << app.help();
      return 2;
    }
    if (*features) return cmd_features(in1, output, config, out);
    if (*annotate_cmd) return cmd_annotate(in1, output, ground_mode, config, out);
    if (*evaluate) return cmd_evaluate(in1, in2, json_path, out);
    if (*fuse_cmd) return cmd_fuse(in1, in2, fuse_dir, no_semantic, config, out);
    if (*synth) return cmd_synth(in1, output, out);
  } catch (const StageFailure& f) {
    err << "error in stage '" << f.stage << "': " << f.message << '\n';
    return 1;
  }
  return 2;
}

}  // namespace terrafuse
