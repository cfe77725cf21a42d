#include "clinpred/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "clinpred/errors.hpp"
#include "clinpred/ingest.hpp"

namespace clinpred {
namespace {

void check_lengths(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw LengthMismatchError(std::to_string(scores.size()) + " scores vs " + std::to_string(labels.size()) +
                              " labels");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) throw PreconditionError("labels must be 0 or 1");
  }
  for (const double s : scores) {
    if (std::isnan(s)) throw PreconditionError("score is NaN");
  }
}

void check_both_classes(std::span<const int> labels) {
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (pos == 0 || pos == labels.size()) {
    throw DegenerateLabelsError("labels contain a single class (" + std::to_string(pos) + " positives of " +
                                std::to_string(labels.size()) + ")");
  }
}

double ratio(std::uint64_t num, std::uint64_t den) { return static_cast<double>(num) / static_cast<double>(den); }

struct ClassMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

ClassMetrics class_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  ClassMetrics m;
  if (tp + fp > 0) m.precision = ratio(tp, tp + fp);
  if (tp + fn > 0) m.recall = ratio(tp, tp + fn);
  if (m.precision && m.recall && tp > 0) m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return m;
}

std::optional<double> blend(std::optional<double> a, double wa, std::optional<double> b, double wb) {
  if (!a || !b) return std::nullopt;
  return wa * *a + wb * *b;
}

// Distinct scores in descending order with the counts at or above each.
struct Sweep {
  std::vector<double> thresholds;
  std::vector<ConfusionCounts> counts;
};

Sweep sweep(std::span<const double> scores, std::span<const int> labels) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto pos = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), 1));
  const auto neg = static_cast<std::uint64_t>(labels.size()) - pos;

  Sweep s;
  ConfusionCounts c{0, 0, pos, neg};
  s.thresholds.push_back(std::numeric_limits<double>::infinity());
  s.counts.push_back(c);
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      if (labels[order[i]] == 1) {
        ++c.tp;
        --c.fn;
      } else {
        ++c.fp;
        --c.tn;
      }
      ++i;
    }
    s.thresholds.push_back(t);
    s.counts.push_back(c);
  }
  return s;
}

}  // namespace

ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_lengths(scores, labels);
  if (scores.empty()) throw EmptyEvaluationError("no rows to evaluate");
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

std::string_view to_string(Averaging a) noexcept {
  switch (a) {
    case Averaging::binary: return "binary";
    case Averaging::macro: return "macro";
    case Averaging::weighted: return "weighted";
  }
  return "?";
}

Averaging parse_averaging(std::string_view text) {
  if (text == "binary") return Averaging::binary;
  if (text == "macro") return Averaging::macro;
  if (text == "weighted") return Averaging::weighted;
  throw ConfigError("unknown averaging '" + std::string(text) + "' (expected binary, macro or weighted)");
}

MetricBundle metrics_from_counts(const ConfusionCounts& c, Averaging averaging) {
  if (c.total() == 0) throw EmptyEvaluationError("confusion counts are all zero");
  MetricBundle m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  const auto pos = class_metrics(c.tp, c.fp, c.fn);
  if (averaging == Averaging::binary) {
    m.precision = pos.precision;
    m.recall = pos.recall;
    m.f1 = pos.f1;
    return m;
  }
  const auto neg = class_metrics(c.tn, c.fn, c.fp);
  double w1 = 0.5;
  double w0 = 0.5;
  if (averaging == Averaging::weighted) {
    w1 = ratio(c.positives(), c.total());
    w0 = ratio(c.negatives(), c.total());
  }
  m.precision = blend(pos.precision, w1, neg.precision, w0);
  m.recall = blend(pos.recall, w1, neg.recall, w0);
  m.f1 = blend(pos.f1, w1, neg.f1, w0);
  return m;
}

RocCurve roc_points(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  check_both_classes(labels);
  const auto s = sweep(scores, labels);
  RocCurve curve;
  curve.points.reserve(s.thresholds.size());
  for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
    const auto& c = s.counts[i];
    curve.points.push_back({s.thresholds[i], ratio(c.fp, c.negatives()), ratio(c.tp, c.positives())});
  }
  return curve;
}

double auc(const RocCurve& curve) noexcept {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return std::clamp(area, 0.0, 1.0);
}

double auc(std::span<const double> scores, std::span<const int> labels) { return auc(roc_points(scores, labels)); }

std::string roc_csv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    out += std::isinf(p.threshold) ? std::string(p.threshold > 0 ? "inf" : "-inf") : format_double(p.threshold);
    out += ',';
    out += format_double(p.fpr);
    out += ',';
    out += format_double(p.tpr);
    out += '\n';
  }
  return out;
}

std::string to_string(const ThresholdCriterion& c) {
  switch (c.rule) {
    case ThresholdRule::max_f1: return "max_f1";
    case ThresholdRule::max_youden: return "max_youden";
    case ThresholdRule::fixed: return "fixed:" + format_double(c.value);
  }
  return "?";
}

ThresholdCriterion parse_threshold_criterion(std::string_view text) {
  if (text == "max_f1") return {ThresholdRule::max_f1, 0.5};
  if (text == "max_youden") return {ThresholdRule::max_youden, 0.5};
  std::string_view num = text;
  if (num.starts_with("fixed:")) num.remove_prefix(6);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc{} || ptr != num.data() + num.size() || num.empty() || !std::isfinite(v)) {
    throw ConfigError("threshold must be max_f1, max_youden, fixed:<value> or a number (got '" +
                      std::string(text) + "')");
  }
  return {ThresholdRule::fixed, v};
}

ThresholdChoice optimal_threshold(std::span<const double> scores, std::span<const int> labels,
                                  const ThresholdCriterion& criterion) {
  ThresholdChoice choice;
  choice.criterion = criterion;
  if (criterion.rule == ThresholdRule::fixed) {
    choice.threshold = criterion.value;
    if (!scores.empty()) {
      const auto c = confusion_at(scores, labels, criterion.value);
      choice.achieved = class_metrics(c.tp, c.fp, c.fn).f1;
    }
    return choice;
  }
  check_lengths(scores, labels);
  check_both_classes(labels);
  const auto s = sweep(scores, labels);
  // Ascending threshold order so the first maximizer is the smallest.
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = s.thresholds.size(); k-- > 0;) {
    const auto& c = s.counts[k];
    double value = 0.0;
    if (criterion.rule == ThresholdRule::max_f1) {
      const auto f1 = class_metrics(c.tp, c.fp, c.fn).f1;
      value = f1 ? *f1 : -1.0;
    } else {
      value = ratio(c.tp, c.positives()) - ratio(c.fp, c.negatives());
    }
    if (value > best) {
      best = value;
      choice.threshold = s.thresholds[k];
    }
  }
  if (best > -1.0) choice.achieved = best;
  return choice;
}

Evaluation evaluate_scores(std::vector<double> scores, std::span<const int> labels,
                           const ThresholdCriterion& criterion, Averaging averaging) {
  Evaluation ev;
  ev.scores = std::move(scores);
  ev.threshold = optimal_threshold(ev.scores, labels, criterion);
  ev.counts = confusion_at(ev.scores, labels, ev.threshold.threshold);
  ev.metrics = metrics_from_counts(ev.counts, averaging);
  ev.roc = roc_points(ev.scores, labels);
  ev.metrics.auc = auc(ev.roc);
  return ev;
}

Evaluation evaluate(const ScoreModel& model, const LabeledMatrix& test, const ThresholdCriterion& criterion,
                    Averaging averaging, Execution exec) {
  test.check();
  return evaluate_scores(predict_probabilities(model, test.features, exec), test.labels, criterion, averaging);
}

}  // namespace clinpred
