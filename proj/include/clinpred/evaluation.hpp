#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clinpred/dataset.hpp"
#include "clinpred/models.hpp"

namespace clinpred {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  std::uint64_t positives() const noexcept { return tp + fn; }
  std::uint64_t negatives() const noexcept { return fp + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Predicted positive iff score >= threshold.
ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels, double threshold);

/// binary: positive-class metrics. macro/weighted average the per-class
/// precision, recall and f1 of both classes (weights = actual class sizes).
enum class Averaging { binary, macro, weighted };

std::string_view to_string(Averaging a) noexcept;
Averaging parse_averaging(std::string_view text);

/// Undefined metrics (zero denominators) are empty.
struct MetricBundle {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1;
  std::optional<double> auc;

  bool operator==(const MetricBundle&) const = default;
};

/// Throws EmptyEvaluationError when every count is zero. auc is left empty.
MetricBundle metrics_from_counts(const ConfusionCounts& c, Averaging averaging = Averaging::binary);

struct RocPoint {
  double threshold = 0.0;  // +inf for the leading point
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  std::vector<RocPoint> points;

  bool operator==(const RocCurve&) const = default;
};

/// One point per candidate threshold: +inf, then every distinct score in
/// descending order. Tied scores share a point. Throws DegenerateLabelsError
/// when only one class is present.
RocCurve roc_points(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve) noexcept;
double auc(std::span<const double> scores, std::span<const int> labels);

/// "threshold,fpr,tpr" header plus one row per point, full precision.
std::string roc_csv(const RocCurve& curve);

enum class ThresholdRule { max_f1, max_youden, fixed };

struct ThresholdCriterion {
  ThresholdRule rule = ThresholdRule::max_f1;
  double value = 0.5;  // fixed only

  bool operator==(const ThresholdCriterion&) const = default;
};

std::string to_string(const ThresholdCriterion& c);
/// "max_f1", "max_youden", "fixed:<value>" or a bare number.
ThresholdCriterion parse_threshold_criterion(std::string_view text);

struct ThresholdChoice {
  double threshold = 0.5;
  ThresholdCriterion criterion;
  std::optional<double> achieved;  // criterion value; f1 for fixed thresholds

  bool operator==(const ThresholdChoice&) const = default;
};

/// Evaluates the criterion at +inf and every distinct score; the maximizer
/// wins, ties going to the smallest threshold.
ThresholdChoice optimal_threshold(std::span<const double> scores, std::span<const int> labels,
                                  const ThresholdCriterion& criterion);

struct Evaluation {
  std::vector<double> scores;  // probability scale
  ThresholdChoice threshold;
  ConfusionCounts counts;
  MetricBundle metrics;  // threshold metrics plus threshold-free auc
  RocCurve roc;
};

Evaluation evaluate_scores(std::vector<double> scores, std::span<const int> labels,
                           const ThresholdCriterion& criterion, Averaging averaging = Averaging::binary);

Evaluation evaluate(const ScoreModel& model, const LabeledMatrix& test, const ThresholdCriterion& criterion,
                    Averaging averaging = Averaging::binary, Execution exec = {});

}  // namespace clinpred
