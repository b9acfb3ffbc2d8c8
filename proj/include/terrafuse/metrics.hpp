#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "terrafuse/core/point_cloud.hpp"

namespace terrafuse {

inline constexpr std::array<ClassLabel, 3> kEvaluatedClasses{ClassLabel::Ground, ClassLabel::Building,
                                                             ClassLabel::Tree};

/// counts(truth, predicted) over Ground, Building, Tree (rows/cols 0..2).
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, 3, 3> counts = Eigen::Matrix<std::int64_t, 3, 3>::Zero();
  /// Points where either side is Unlabeled.
  std::int64_t unlabeled = 0;

  std::int64_t total() const { return counts.sum(); }
};

/// Throws LengthMismatch.
ConfusionMatrix confusion_matrix(std::span<const ClassLabel> predicted, std::span<const ClassLabel> truth);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double iou = 0;
  std::int64_t support = 0;  // truth points
  /// No truth and no predicted points; all values reported as 0.
  bool undefined = false;
};

std::array<ClassMetrics, 3> class_metrics(const ConfusionMatrix& cm);

/// Fills f1 and iou from a precision/recall pair.
ClassMetrics metrics_from_precision_recall(double precision, double recall, std::int64_t support = 0);

struct AggregateMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double iou = 0;
  std::int64_t support = 0;
};

struct Aggregates {
  AggregateMetrics macro;
  AggregateMetrics weighted;
};

/// Macro: unweighted mean over the defined classes. Weighted: mean weighted by
/// `counts` (truth point counts).
Aggregates aggregate_metrics(std::span<const ClassMetrics> per_class, std::span<const std::int64_t> counts);

struct MetricsReport {
  struct Row {
    std::string name;
    ClassMetrics metrics;
  };
  std::vector<Row> rows;
  Aggregates aggregates;
  std::int64_t unlabeled = 0;
};

MetricsReport make_report(const ConfusionMatrix& cm);
MetricsReport make_report(std::vector<MetricsReport::Row> rows);

/// Half-up rounding to 3 decimals.
double round3(double v);

/// Fixed-width table: header "precision recall f1-score IOU # points", one row
/// per class, then "macro avg" and "weighted avg".
std::string render_report(const MetricsReport& report);

/// Machine-readable form of the report.
std::string report_to_json(const MetricsReport& report);

}  // namespace terrafuse
