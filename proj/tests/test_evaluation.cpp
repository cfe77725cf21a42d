#include <cmath>
#include <limits>

#include "clinpred/errors.hpp"
#include "clinpred/evaluation.hpp"
#include "clinpred/models.hpp"
#include "doctest.h"

using namespace clinpred;

namespace {

using Pt = std::pair<double, double>;

std::vector<Pt> coords(const RocCurve& c) {
  std::vector<Pt> out;
  for (const auto& p : c.points) out.emplace_back(p.fpr, p.tpr);
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {
  TEST_CASE("confusion counts") {
    const std::vector<double> s{0.9, 0.1};
    const std::vector<int> y{1, 0};
    CHECK(confusion_at(s, y, 0.5) == ConfusionCounts{1, 0, 0, 1});
    CHECK(confusion_at(s, y, 0.95) == ConfusionCounts{0, 0, 1, 1});
    CHECK(confusion_at(std::vector<double>{0.5}, std::vector<int>{1}, 0.5).tp == 1);
    CHECK_THROWS_AS(confusion_at(s, std::vector<int>{1}, 0.5), LengthMismatchError);
  }

  TEST_CASE("metrics from counts") {
    const auto lr = metrics_from_counts({120, 34, 148, 2416});
    CHECK(std::abs(*lr.precision - 0.7792) < 5e-5);
    CHECK(std::abs(*lr.recall - 0.4478) < 5e-5);
    CHECK(std::abs(*lr.accuracy - 0.9330) < 5e-5);
    CHECK(std::abs(*lr.f1 - 0.5687) < 5e-5);

    const auto gbt = metrics_from_counts({231, 23, 37, 2427});
    CHECK(std::abs(*gbt.precision - 0.9094) < 5e-5);
    CHECK(std::abs(*gbt.recall - 0.8619) < 5e-5);
    CHECK(std::abs(*gbt.accuracy - 0.9779) < 5e-5);
    CHECK(std::abs(*gbt.f1 - 0.8851) < 5e-5);

    const auto sym = metrics_from_counts({7, 7, 7, 7});
    CHECK(*sym.precision == 0.5);
    CHECK(*sym.recall == 0.5);
    CHECK(*sym.accuracy == 0.5);
    CHECK(*sym.f1 == 0.5);

    const auto none = metrics_from_counts({0, 0, 3, 5});
    CHECK_FALSE(none.precision);
    CHECK_FALSE(none.f1);
    CHECK(*none.recall == 0.0);
    CHECK_THROWS_AS(metrics_from_counts({}), EmptyEvaluationError);

    const auto macro = metrics_from_counts({112, 16, 15, 59}, Averaging::macro);
    const double p1 = 112.0 / 128.0, p0 = 59.0 / 74.0;
    CHECK(*macro.precision == doctest::Approx((p1 + p0) / 2));
    const auto weighted = metrics_from_counts({112, 16, 15, 59}, Averaging::weighted);
    const double r1 = 112.0 / 127.0, r0 = 59.0 / 75.0;
    CHECK(*weighted.recall == doctest::Approx((127 * r1 + 75 * r0) / 202));
  }

  TEST_CASE("roc points") {
    const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> y{0, 0, 1, 1};
    const auto c = roc_points(s, y);
    CHECK(coords(c) == std::vector<Pt>{{0, 0}, {0, 0.5}, {0.5, 0.5}, {0.5, 1}, {1, 1}});
    CHECK(std::isinf(c.points.front().threshold));
    CHECK(auc(c) == 0.75);
    CHECK(auc(s, y) == 0.75);

    const auto perfect = roc_points(std::vector<double>{0.9, 0.8, 0.2}, std::vector<int>{1, 1, 0});
    bool corner = false;
    for (const auto& p : perfect.points) corner = corner || (p.fpr == 0 && p.tpr == 1);
    CHECK(corner);
    CHECK(auc(perfect) == 1.0);

    const auto tie = roc_points(std::vector<double>{0.3, 0.3, 0.3}, std::vector<int>{1, 0, 1});
    CHECK(coords(tie) == std::vector<Pt>{{0, 0}, {1, 1}});
    CHECK(auc(tie) == 0.5);

    CHECK_THROWS_AS(roc_points(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), DegenerateLabelsError);
    CHECK(roc_csv(c).rfind("threshold,fpr,tpr\n", 0) == 0);
  }

  TEST_CASE("threshold selection") {
    const std::vector<double> s{0.2, 0.6, 0.7, 0.9};
    const std::vector<int> y{0, 0, 1, 1};
    const auto best = optimal_threshold(s, y, {ThresholdRule::max_f1});
    CHECK(best.threshold == 0.7);
    CHECK(*best.achieved == 1.0);

    const auto fixed = optimal_threshold(s, y, {ThresholdRule::fixed, 0.5});
    CHECK(fixed.threshold == 0.5);

    const auto youden = optimal_threshold(s, y, {ThresholdRule::max_youden});
    CHECK(youden.threshold == 0.7);

    CHECK(parse_threshold_criterion("fixed:0.25") == ThresholdCriterion{ThresholdRule::fixed, 0.25});
    CHECK(parse_threshold_criterion("0.4") == ThresholdCriterion{ThresholdRule::fixed, 0.4});
    CHECK(parse_threshold_criterion("max_youden").rule == ThresholdRule::max_youden);
    CHECK(parse_threshold_criterion(to_string({ThresholdRule::fixed, 0.1})).value == 0.1);
    CHECK_THROWS_AS(parse_threshold_criterion("best"), ConfigError);
  }

  TEST_CASE("evaluation composition") {
    const std::vector<int> y{1, 0, 1, 0};
    const auto flat = evaluate_scores({0.4, 0.4, 0.4, 0.4}, y, {ThresholdRule::fixed, 0.5});
    CHECK(*flat.metrics.auc == 0.5);

    TreeModel leaf;
    leaf.n_features = 1;
    leaf.tree.nodes.push_back({-1, 0.0, -1, -1, 1.0});
    LabeledMatrix test;
    test.features = Matrix(4, 1);
    test.labels = y;
    test.feature_names = {"x"};
    const auto e = evaluate(ScoreModel{leaf}, test, {ThresholdRule::fixed, 0.5});
    CHECK(*e.metrics.recall == 1.0);
    CHECK(e.counts.fp == 2);
  }
}
