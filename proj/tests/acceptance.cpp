// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "terrafuse/cli.hpp"
#include "terrafuse/core.hpp"
#include "terrafuse/features.hpp"
#include "terrafuse/fusion.hpp"
#include "terrafuse/metrics.hpp"
#include "terrafuse/rulepipe.hpp"
#include "terrafuse/segment.hpp"
#include "terrafuse/synthetic.hpp"

using namespace terrafuse;
namespace fs = std::filesystem;
using testing::make_cloud;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_ < 5) detail_ << (failures_ ? "; " : "") << what;
    failures_ += !ok;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::ostringstream s;
    s << failures_ << " failure(s): " << detail_.str();
    return {false, s.str()};
  }

 private:
  std::size_t failures_ = 0;
  std::ostringstream detail_;
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// Canonical relabeling by first occurrence; equal vectors mean equal partitions.
std::vector<std::size_t> canonical(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> seen;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(seen.emplace(l, seen.size()).first->second);
  return out;
}

Eigen::Matrix3Xd to_matrix(const std::vector<oracle::Vec3>& pts) {
  Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) << pts[i][0], pts[i][1], pts[i][2];
  return m;
}

// Lattice on the plane through `origin` spanned by u and v.
std::vector<oracle::Vec3> plane_patch(const Eigen::Vector3d& origin, const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                                      int n, double spacing) {
  std::vector<oracle::Vec3> pts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector3d p = origin + spacing * (i * u + j * v);
      pts.push_back({p.x(), p.y(), p.z()});
    }
  }
  return pts;
}

Outcome metric_arithmetic() {
  Check c;
  const auto ground = metrics_from_precision_recall(0.932, 0.896);
  c.expect(std::abs(round3(ground.f1) - 0.914) <= 0.001, "ground f1 " + fmt(ground.f1, 6));
  c.expect(std::abs(round3(ground.iou) - 0.841) <= 0.001, "ground iou " + fmt(ground.iou, 6));

  const std::vector<std::int64_t> counts{4161782, 1593903, 6237970};
  std::vector<ClassMetrics> rows;
  for (double f1 : {0.914, 0.844, 0.929}) {
    ClassMetrics m;
    m.f1 = f1;
    rows.push_back(m);
  }
  const auto agg = aggregate_metrics(rows, counts);
  c.expect(std::abs(agg.macro.f1 - 0.896) <= 0.001, "macro f1 " + fmt(agg.macro.f1, 6));
  c.expect(std::abs(agg.weighted.f1 - 0.913) <= 0.001, "weighted f1 " + fmt(agg.weighted.f1, 6));
  return c.done("f1 " + fmt(round3(ground.f1)) + ", iou " + fmt(round3(ground.iou)) + ", macro f1 " +
                fmt(agg.macro.f1, 5) + ", weighted f1 " + fmt(agg.weighted.f1, 6));
}

Outcome dice_jaccard() {
  Check c;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> count(0, 100000);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) cm.counts(r, s) = count(rng);
    for (const auto& m : class_metrics(cm)) {
      const double gap = std::abs(m.iou - m.f1 / (2 - m.f1));
      worst = std::max(worst, gap);
      c.expect(gap <= 1e-12, "identity gap " + fmt(gap));
    }
  }
  return c.done("1000 matrices, max |iou - f1/(2-f1)| = " + fmt(worst));
}

Outcome feature_correctness() {
  Check c;
  const double h = std::sqrt(0.5);
  const struct {
    Eigen::Vector3d u, v;
    double expect;
  } planes[] = {
      {{1, 0, 0}, {0, 1, 0}, 0.0},
      {{1, 0, 0}, {0, 0, 1}, 1.0},
      {{1, 0, 0}, {0, h, -h}, 1.0 - h},
  };
  double worst_v = 0;
  for (const auto& p : planes) {
    const auto eig = covariance_eigen(to_matrix(plane_patch({3, -1, 7}, p.u, p.v, 12, 0.2)));
    const double v = verticality(eig.e3());
    worst_v = std::max(worst_v, std::abs(v - p.expect));
    c.expect(std::abs(v - p.expect) <= 1e-6, "verticality " + fmt(v, 9) + " vs " + fmt(p.expect, 9));
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1), s(0.05, 1.5);
  std::uniform_int_distribution<int> size(3, 80);
  double worst_l = 0, worst_r = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double sx = s(rng), sy = s(rng), sz = s(rng);
    std::vector<oracle::Vec3> pts(static_cast<std::size_t>(size(rng)));
    for (auto& q : pts) q = {sx * u(rng) + 100, sy * u(rng) - 40, sz * u(rng) + 12};
    const auto cov = oracle::covariance(pts);
    const auto ev = oracle::eigenvalues(cov);
    const auto eig = covariance_eigen(to_matrix(pts));
    for (int k = 0; k < 3; ++k) {
      const double d = std::abs(eig.lambdas(k) - ev[k] / ev[0]);
      worst_l = std::max(worst_l, d);
      c.expect(d <= 1e-9, "normalized eigenvalue off by " + fmt(d));
      if (k == 2 && ev[1] - ev[2] > 1e-6 * ev[0]) {
        const auto ref = oracle::eigenvector(cov, ev[2]);
        const double dot = std::abs(eig.e3().dot(Eigen::Vector3d(ref[0], ref[1], ref[2])));
        c.expect(std::abs(dot - 1) <= 1e-9, "e3 direction off by " + fmt(1 - dot));
      }
    }

    // exact plane with a random orientation: the centre lies on it
    Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
    a.normalize();
    b = (b - b.dot(a) * a).normalized();
    const Eigen::Vector3d o(50 * u(rng), 50 * u(rng), 10 * u(rng));
    const auto patch = plane_patch(o, a, b, 7, 0.3);
    const Eigen::Vector3d center = o + 0.37 * a + 0.81 * b;
    const double r = roughness(to_matrix(patch), center, 1.0);
    worst_r = std::max(worst_r, r);
    c.expect(r <= 1e-9, "plane roughness " + fmt(r));
  }
  return c.done("verticality err " + fmt(worst_v) + ", eigen err " + fmt(worst_l) + ", plane roughness " + fmt(worst_r));
}

Outcome spatial_parity() {
  Check c;
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<std::size_t> size(1000, 10000);
  std::size_t total = 0;
  for (int cloud_id = 0; cloud_id < 20; ++cloud_id) {
    const std::size_t n = size(rng);
    total += n;
    const double extent = std::cbrt(static_cast<double>(n)) * 1.5;
    const auto pts = testing::uniform_points(n, extent, 1000 + static_cast<std::uint64_t>(cloud_id));
    const PointCloud cloud = make_cloud(pts);
    const SpatialIndex index(cloud);
    const double r = cloud_id % 2 ? 0.5 : 3.0;
    for (int dims : {2, 3}) {
      const Dims d = dims == 2 ? Dims::Two : Dims::Three;
      for (std::size_t i = 0; i < n; ++i) {
        const auto expect = oracle::radius(pts, pts[i], r, dims, static_cast<std::ptrdiff_t>(i));
        const IdSet got = index.radius_neighbors(i, r, d);
        if (got != IdSet(expect.begin(), expect.end())) {
          c.expect(false, "radius mismatch cloud " + std::to_string(cloud_id) + " point " + std::to_string(i));
        }
      }
    }
    const double link = extent / 12;
    const auto cc = connected_components(cloud, all_ids(n), link, 1);
    c.expect(canonical(cc.component) == canonical(oracle::components(pts, link)),
             "component mismatch cloud " + std::to_string(cloud_id));
  }
  return c.done("20 clouds, " + std::to_string(total) + " points, radius 2D/3D and components match");
}

SceneSpec scene_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919);
  SceneSpec spec;
  spec.extent_x = spec.extent_y = 150;
  spec.building_count = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
  spec.tree_count = std::uniform_int_distribution<std::size_t>(5, 15)(rng);
  spec.seed = seed;
  return spec;
}

Outcome rule_pipeline() {
  Check c;
  double worst = 1;
  std::size_t points = 0;
  const GroundParams gp;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto scene = generate_synthetic_scene(scene_spec(seed));
    points += scene.cloud.size();
    const IdSet ground = ground_postprocess(scene.cloud, extract_ground(scene.cloud, gp), 1.0, 100).kept;
    const auto result = annotate(scene.cloud, ground, RuleConfig{}, FeatureParams{});
    c.expect(result.trace.telescopes(scene.cloud.size() - ground.size()), "trace does not telescope, seed " + std::to_string(seed));
    const auto m = class_metrics(confusion_matrix(*result.labeled.labels, scene.truth));
    for (std::size_t k = 0; k < 3; ++k) {
      worst = std::min(worst, m[k].f1);
      c.expect(m[k].f1 >= 0.95, std::string(label_name(kEvaluatedClasses[k])) + " f1 " + fmt(m[k].f1) + " seed " +
                                    std::to_string(seed));
    }
  }
  return c.done("10 scenes, " + std::to_string(points / 10) + " points avg, min class f1 " + fmt(worst));
}

Outcome threshold_semantics() {
  Check c;
  const RuleConfig rc;
  FeatureRecord f{0.5, 0.3, 0, true};
  c.expect(survives_verticality(f, rc), "verticality 0.5 removed");
  c.expect(survives_roughness(f, rc), "roughness 0.3 removed");
  f.verticality = std::nextafter(0.5, 1.0);
  f.roughness = std::nextafter(0.3, 1.0);
  c.expect(!survives_verticality(f, rc) && !survives_roughness(f, rc), "values above the thresholds survive");

  // blue, density and component boundaries through the stage runner
  PointCloud blue = make_cloud({{0, 0, 0}, {1, 0, 0}});
  blue.colors.col(0) << 0, 0, 60;
  blue.colors.col(1) << 0, 0, 59;
  const Stage blue_only[] = {Stage::Blue};
  c.expect(extract_roofs(blue, rc, blue_only, FeatureParams{}).roofs == IdSet{0}, "blue boundary");

  std::vector<oracle::Vec3> pts{{0, 0, 0}};
  for (int k = 0; k < 60; ++k) pts.push_back({2 * std::cos(k * std::numbers::pi / 30), 2 * std::sin(k * std::numbers::pi / 30), 0});
  RuleConfig open = rc;
  open.blue_max = 0;
  open.verticality_max = 1;
  open.roughness_max = 1;
  FeatureParams fp;
  fp.feature_radius = 4.5;
  fp.min_neighbors = 3;
  const Stage to_density[] = {Stage::Blue, Stage::Verticality, Stage::Roughness, Stage::Density};
  const auto dens = extract_roofs(make_cloud(pts), open, to_density, fp);
  c.expect(std::binary_search(dens.roofs.begin(), dens.roofs.end(), Index{0}), "60 neighbours removed");
  pts.pop_back();
  const auto dens59 = extract_roofs(make_cloud(pts), open, to_density, fp);
  c.expect(!std::binary_search(dens59.roofs.begin(), dens59.roofs.end(), Index{0}), "59 neighbours kept");

  std::vector<oracle::Vec3> strips;
  for (int i = 0; i < 100; ++i) strips.push_back({0.5 * (i / 2), 0.5 * (i % 2), 0});
  for (int i = 0; i < 99; ++i) strips.push_back({0.5 * (i / 2), 100 + 0.5 * (i % 2), 0});
  open.density_min = 1;
  const auto comp = extract_roofs(make_cloud(strips), open, kAllStages, fp);
  c.expect(comp.roofs == all_ids(100), "component of 100 not the sole survivor");
  return c.done("blue 60, verticality 0.5, roughness 0.3, 60 neighbours and 100-point component all survive");
}

Outcome icp_recovery() {
  Check c;
  SceneSpec spec;
  spec.extent_x = spec.extent_y = 80;
  spec.building_count = 3;
  spec.tree_count = 8;
  spec.seed = 5;
  const PointCloud cloud = generate_synthetic_scene(spec).cloud;
  IcpParams params;
  params.max_iterations = 300;
  params.max_correspondence_dist = 20;
  params.convergence_delta = 1e-9;

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1), unit(0, 1);
  std::normal_distribution<double> g;
  double worst_rot = 0, worst_t = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double angle = 10.0 * std::numbers::pi / 180 * unit(rng);
    Eigen::Vector3d t(g(rng), g(rng), g(rng));
    t *= 5.0 * unit(rng) / t.norm();
    const auto truth = RigidTransformd::FromAngleAxis(angle, Eigen::Vector3d(g(rng), g(rng), g(rng)), t);
    const auto r = icp(apply_transform(cloud, truth), cloud, RigidTransformd::Identity(), params);
    const auto inv = truth.inverse();
    const double rot = RigidTransformd::rotation_angle(r.transform.rotation * inv.rotation.transpose()) * 180 / std::numbers::pi;
    const double terr = (r.transform.translation - inv.translation).norm();
    worst_rot = std::max(worst_rot, rot);
    worst_t = std::max(worst_t, terr);
    c.expect(rot < 0.1, "rotation error " + fmt(rot) + " deg, trial " + std::to_string(trial));
    c.expect(terr < 0.05, "translation error " + fmt(terr) + " m, trial " + std::to_string(trial));
    const auto& hist = r.stats.rms_history;
    for (std::size_t k = 1; k < hist.size(); ++k) {
      c.expect(hist[k] <= hist[k - 1], "rms increased at iteration " + std::to_string(k) + ", trial " + std::to_string(trial));
    }
  }
  return c.done("50 perturbations, worst rotation " + fmt(worst_rot) + " deg, worst translation " + fmt(worst_t) + " m");
}

struct BowlSetup {
  PointCloud uav, bing;
  GroundLabels labels;
};

BowlSetup bowl_setup() {
  SceneSpec spec;
  spec.extent_x = spec.extent_y = 200;
  spec.building_count = 5;
  spec.tree_count = 15;
  spec.seed = 8;
  spec.crs_tag = "utm17n";
  const auto scene = generate_synthetic_scene(spec);
  BowlSetup s;
  s.bing = scene.cloud;
  IdSet inner;
  for (Index i = 0; i < s.bing.size(); ++i) {
    if (s.bing.position(i).head<2>().cwiseAbs().maxCoeff() < 50) inner.push_back(i);
  }
  s.uav = s.bing.subset(inner);
  apply_bowl_warp(s.uav, Eigen::Vector2d::Zero(), 40.0, 2.0);
  s.uav = apply_transform(s.uav, RigidTransformd::FromAngleAxis(0.5 * std::numbers::pi / 180, Eigen::Vector3d::UnitZ(),
                                                                 Eigen::Vector3d(0.7, -0.4, 0.5)));
  s.labels.bing = ids_with_label(scene.truth, ClassLabel::Ground);
  s.labels.uav = ids_with_label(*s.uav.labels, ClassLabel::Ground);
  return s;
}

Outcome semantic_fusion() {
  Check c;
  const BowlSetup s = bowl_setup();
  FusionConfig config;
  const auto with = fuse(s.uav, s.bing, s.labels, config);
  config.semantic = false;
  const auto without = fuse(s.uav, s.bing, s.labels, config);
  const auto& a = with.diagnostics.border_gap_after;
  const auto& b = without.diagnostics.border_gap_after;
  if (!a || !b) return {false, "border gap unavailable"};
  c.expect(*a <= 0.5 * *b, "gap " + fmt(*a) + " vs two-pass " + fmt(*b));
  c.expect(with.ground.translation.x() == 0.0 && with.ground.translation.y() == 0.0, "ground-stage x/y translation non-zero");
  c.expect(with.warnings.empty(), "warnings: " + (with.warnings.empty() ? "" : with.warnings.front()));
  return c.done("border mean |dz| " + fmt(*b) + " -> " + fmt(*a) + " m (" + fmt(100 * (1 - *a / *b), 3) +
                "% reduction), ground t = (0, 0, " + fmt(with.ground.translation.z()) + ")");
}

Outcome partition_identities() {
  Check c;
  std::mt19937_64 rng(90);
  std::uniform_real_distribution<double> u(-40, 40);
  std::uniform_real_distribution<double> cell(1, 10);
  for (int trial = 0; trial < 30; ++trial) {
    const PointCloud bing = make_cloud(testing::uniform_points(4000, 100, 500 + static_cast<std::uint64_t>(trial)));
    PointCloud uav = make_cloud(testing::uniform_points(300, 30, 700 + static_cast<std::uint64_t>(trial)));
    uav = apply_transform(uav, RigidTransformd::Translation({u(rng) + 35, u(rng) + 35, 0}));
    const Footprint fp = compute_footprint(uav, cell(rng));
    const auto in = crop_overlap(bing, fp, 0.0), out = remove_overlap(bing, fp);
    IdSet merged;
    std::merge(in.kept.begin(), in.kept.end(), out.kept.begin(), out.kept.end(), std::back_inserter(merged));
    c.expect(merged == all_ids(bing.size()) && in.kept.size() + out.kept.size() == bing.size(),
             "crop/remove not a partition, trial " + std::to_string(trial));
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SceneSpec spec;
    spec.extent_x = spec.extent_y = 60;
    spec.building_count = seed % 3;
    spec.tree_count = seed;
    spec.seed = seed;
    const auto scene = generate_synthetic_scene(spec);
    std::bernoulli_distribution coin(0.3);
    IdSet ground;
    for (Index i = 0; i < scene.cloud.size(); ++i) {
      if (coin(rng)) ground.push_back(i);
    }
    for (const IdSet& g : {ground, IdSet{}, all_ids(scene.cloud.size())}) {
      const auto r = annotate(scene.cloud, g, RuleConfig{}, FeatureParams{});
      const auto& labels = *r.labeled.labels;
      std::size_t counted = 0;
      for (auto cls : kEvaluatedClasses) counted += ids_with_label(labels, cls).size();
      c.expect(labels.size() == scene.cloud.size() && counted == labels.size(), "annotate labeling not total");
      for (Index i : g) c.expect(labels[i] == ClassLabel::Ground, "ground id relabeled");
    }
  }
  return c.done("30 crop/remove partitions, 15 annotate runs with total labelings");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_reproducibility() {
  Check c;
  const fs::path dir = testing::temp_dir("acceptance_cli");
  std::ofstream(dir / "spec.json") << R"({"extent_x": 70, "extent_y": 70, "building_count": 2, "tree_count": 6, "seed": 3, "crs_tag": "utm17n"})";
  std::ofstream(dir / "config.json") << R"({"stages": {"smooth": true, "clean_buildings": true}})";

  auto same = [&](const std::string& what, const fs::path& a, const fs::path& b) {
    c.expect(fs::exists(a) && slurp(a) == slurp(b), what + " differs between runs");
  };
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    c.expect(code == 0, args.front() + " exited " + std::to_string(code) + ": " + err.str());
    return out.str();
  };
  const std::string s = dir.string() + "/";
  std::vector<std::string> stdout_text[2];
  for (int k = 0; k < 2; ++k) {
    const std::string t = std::to_string(k);
    auto& o = stdout_text[k];
    o.push_back(run({"synth", s + "spec.json", "-o", s + "scene" + t + ".ply"}));
    o.push_back(run({"features", s + "scene0.ply", "-o", s + "features" + t + ".txt"}));
    o.push_back(run({"annotate", s + "scene0.ply", "-o", s + "labeled" + t + ".ply", "--config", s + "config.json"}));
    o.push_back(run({"annotate", s + "scene0.ply", "-o", s + "auto" + t + ".ply", "--ground-labels", "auto"}));
    o.push_back(run({"evaluate", s + "labeled0.ply", s + "scene0.ply", "--json", s + "report" + t + ".json"}));
    if (k == 0) {
      PointCloud bing = load_point_cloud(dir / "scene0.ply");
      IdSet inner;
      for (Index i = 0; i < bing.size(); ++i) {
        if (bing.position(i).head<2>().cwiseAbs().maxCoeff() < 20) inner.push_back(i);
      }
      save_point_cloud(apply_transform(bing.subset(inner), RigidTransformd::Translation({0.4, -0.3, 0.2})), dir / "uav.ply");
    }
    o.push_back(run({"fuse", s + "uav.ply", s + "scene0.ply", "-o", s + "fused" + t}));
    o.push_back(run({"fuse", s + "uav.ply", s + "scene0.ply", "-o", s + "plain" + t, "--no-semantic"}));
    o.push_back(run({"--print-config", "--config", s + "config.json"}));
  }
  c.expect(stdout_text[0] == stdout_text[1], "standard output differs between runs");
  same("synth", dir / "scene0.ply", dir / "scene1.ply");
  same("features", dir / "features0.txt", dir / "features1.txt");
  same("annotate", dir / "labeled0.ply", dir / "labeled1.ply");
  same("annotate trace", dir / "labeled0.ply.trace.txt", dir / "labeled1.ply.trace.txt");
  same("annotate auto", dir / "auto0.ply", dir / "auto1.ply");
  same("evaluate json", dir / "report0.json", dir / "report1.json");
  for (const char* f : {"transform.txt", "diagnostics.json", "bing_trimmed.ply", "uav_aligned.ply"}) {
    same(std::string("fuse ") + f, dir / "fused0" / f, dir / "fused1" / f);
    same(std::string("fuse --no-semantic ") + f, dir / "plain0" / f, dir / "plain1" / f);
  }
  return c.done("synth, features, annotate, evaluate, fuse and print-config reruns are byte-identical");
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"metric arithmetic", metric_arithmetic},
      {"dice-jaccard identity", dice_jaccard},
      {"feature correctness", feature_correctness},
      {"spatial oracle parity", spatial_parity},
      {"rule pipeline on synthetic scenes", rule_pipeline},
      {"threshold semantics", threshold_semantics},
      {"icp recovery", icp_recovery},
      {"semantic fusion", semantic_fusion},
      {"partition identities", partition_identities},
      {"cli reproducibility", cli_reproducibility},
  };
  int failed = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
