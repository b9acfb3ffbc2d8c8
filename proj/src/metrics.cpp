#include "terrafuse/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "terrafuse/core/error.hpp"

namespace terrafuse {

namespace {

int class_slot(ClassLabel l) {
  switch (l) {
    case ClassLabel::Ground: return 0;
    case ClassLabel::Building: return 1;
    case ClassLabel::Tree: return 2;
    default: return -1;
  }
}

double ratio(std::int64_t num, std::int64_t den) { return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const ClassLabel> predicted, std::span<const ClassLabel> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                               std::to_string(truth.size()) + " truth labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = class_slot(truth[i]), p = class_slot(predicted[i]);
    if (t < 0 || p < 0) {
      cm.unlabeled += 1;
      continue;
    }
    cm.counts(t, p) += 1;
  }
  return cm;
}

ClassMetrics metrics_from_precision_recall(double precision, double recall, std::int64_t support) {
  ClassMetrics m;
  m.precision = precision;
  m.recall = recall;
  m.support = support;
  m.f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
  m.iou = m.f1 / (2 - m.f1);
  return m;
}

std::array<ClassMetrics, 3> class_metrics(const ConfusionMatrix& cm) {
  std::array<ClassMetrics, 3> out;
  for (int c = 0; c < 3; ++c) {
    const std::int64_t tp = cm.counts(c, c);
    const std::int64_t truth = cm.counts.row(c).sum();
    const std::int64_t predicted = cm.counts.col(c).sum();
    const std::int64_t fp = predicted - tp, fn = truth - tp;
    ClassMetrics& m = out[static_cast<std::size_t>(c)];
    m.support = truth;
    m.undefined = truth == 0 && predicted == 0;
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
    m.iou = ratio(tp, tp + fp + fn);
  }
  return out;
}

Aggregates aggregate_metrics(std::span<const ClassMetrics> per_class, std::span<const std::int64_t> counts) {
  if (per_class.size() != counts.size()) throw Error(ErrorKind::LengthMismatch, "one count per class required");
  Aggregates agg;
  std::size_t defined = 0;
  std::int64_t weight_total = 0;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const ClassMetrics& m = per_class[c];
    agg.macro.support += counts[c];
    agg.weighted.support += counts[c];
    if (!m.undefined) {
      ++defined;
      agg.macro.precision += m.precision;
      agg.macro.recall += m.recall;
      agg.macro.f1 += m.f1;
      agg.macro.iou += m.iou;
    }
    const auto w = static_cast<double>(counts[c]);
    weight_total += counts[c];
    agg.weighted.precision += w * m.precision;
    agg.weighted.recall += w * m.recall;
    agg.weighted.f1 += w * m.f1;
    agg.weighted.iou += w * m.iou;
  }
  if (defined > 0) {
    const auto d = static_cast<double>(defined);
    agg.macro.precision /= d;
    agg.macro.recall /= d;
    agg.macro.f1 /= d;
    agg.macro.iou /= d;
  }
  if (weight_total > 0) {
    const auto w = static_cast<double>(weight_total);
    agg.weighted.precision /= w;
    agg.weighted.recall /= w;
    agg.weighted.f1 /= w;
    agg.weighted.iou /= w;
  }
  return agg;
}

MetricsReport make_report(std::vector<MetricsReport::Row> rows) {
  MetricsReport report;
  std::vector<ClassMetrics> metrics;
  std::vector<std::int64_t> counts;
  for (const auto& r : rows) {
    metrics.push_back(r.metrics);
    counts.push_back(r.metrics.support);
  }
  report.aggregates = aggregate_metrics(metrics, counts);
  report.rows = std::move(rows);
  return report;
}

MetricsReport make_report(const ConfusionMatrix& cm) {
  const auto per_class = class_metrics(cm);
  std::vector<MetricsReport::Row> rows;
  for (std::size_t c = 0; c < 3; ++c) rows.push_back({label_name(kEvaluatedClasses[c]), per_class[c]});
  MetricsReport report = make_report(std::move(rows));
  report.unlabeled = cm.unlabeled;
  return report;
}

double round3(double v) {
  // The nudge keeps decimal ties such as 0.9125 (stored just below) rounding up.
  return std::floor(v * 1000.0 + 0.5 + 1e-9) / 1000.0;
}

namespace {

std::string with_thousands(std::int64_t v) {
  std::string digits = std::to_string(v < 0 ? -v : v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return v < 0 ? "-" + out : out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", round3(v));
  return buf;
}

void append_row(std::ostringstream& out, const std::string& name, double p, double r, double f1, double iou,
                std::int64_t n) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %9s %9s %9s %9s %12s\n", name.c_str(), fixed3(p).c_str(), fixed3(r).c_str(),
                fixed3(f1).c_str(), fixed3(iou).c_str(), with_thousands(n).c_str());
  out << buf;
}

}  // namespace

std::string render_report(const MetricsReport& report) {
  std::ostringstream out;
  char header[160];
  std::snprintf(header, sizeof header, "%-14s %9s %9s %9s %9s %12s\n", "", "precision", "recall", "f1-score", "IOU",
                "# points");
  out << header;
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    append_row(out, row.name, m.precision, m.recall, m.f1, m.iou, m.support);
  }
  const auto& a = report.aggregates;
  append_row(out, "macro avg", a.macro.precision, a.macro.recall, a.macro.f1, a.macro.iou, a.macro.support);
  append_row(out, "weighted avg", a.weighted.precision, a.weighted.recall, a.weighted.f1, a.weighted.iou,
             a.weighted.support);
  return out.str();
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  auto metrics_json = [](double p, double r, double f1, double iou, std::int64_t n) {
    return nlohmann::ordered_json{{"precision", p}, {"recall", r}, {"f1", f1}, {"iou", iou}, {"points", n}};
  };
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    auto entry = metrics_json(row.metrics.precision, row.metrics.recall, row.metrics.f1, row.metrics.iou,
                              row.metrics.support);
    entry["name"] = row.name;
    entry["undefined"] = row.metrics.undefined;
    j["classes"].push_back(entry);
  }
  const auto& a = report.aggregates;
  j["macro_avg"] = metrics_json(a.macro.precision, a.macro.recall, a.macro.f1, a.macro.iou, a.macro.support);
  j["weighted_avg"] =
      metrics_json(a.weighted.precision, a.weighted.recall, a.weighted.f1, a.weighted.iou, a.weighted.support);
  j["unlabeled_excluded"] = report.unlabeled;
  return j.dump(2) + "\n";
}

}  // namespace terrafuse
