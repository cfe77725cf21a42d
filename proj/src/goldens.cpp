#include <cmath>

#include "clinpred/pipeline.hpp"
#include "clinpred/reporting.hpp"

namespace clinpred {
namespace {

std::vector<GoldenExpectation> four(double p, double r, double f1, double a, double tol) {
  return {{"precision", p, tol}, {"recall", r, tol}, {"f1", f1, tol}, {"accuracy", a, tol}};
}

std::optional<double> pick(const MetricBundle& m, const std::string& metric) {
  if (metric == "precision") return m.precision;
  if (metric == "recall") return m.recall;
  if (metric == "accuracy") return m.accuracy;
  if (metric == "f1") return m.f1;
  return std::nullopt;
}

// Moves a fifth of each diagonal cell off the diagonal.
ConfusionCounts perturbed(ConfusionCounts c) {
  const auto shift_tp = std::max<std::uint64_t>(1, c.tp / 5);
  const auto shift_tn = std::max<std::uint64_t>(1, c.tn / 5);
  c.tp -= std::min(c.tp, shift_tp);
  c.fn += shift_tp;
  c.tn -= std::min(c.tn, shift_tn);
  c.fp += shift_tn;
  return c;
}

}  // namespace

std::vector<GoldenCase> golden_cases() {
  const ConfusionCounts heart_lr{112, 16, 15, 59};
  const ConfusionCounts heart_trees{425, 31, 22, 714};
  const ConfusionCounts ckd_perfect{1418, 0, 0, 1939};
  std::vector<GoldenCase> cases;
  cases.push_back({"thyroid-lr", "thyroid LR counts vs LR metric row", {120, 34, 148, 2416}, Averaging::binary, true,
                   four(0.7792, 0.4478, 0.5687, 0.9330, 0.005)});
  cases.push_back({"thyroid-dt", "thyroid DT counts vs DT metric row", {222, 21, 46, 2429}, Averaging::binary, true,
                   four(0.9136, 0.8284, 0.8689, 0.9753, 0.005)});
  cases.push_back({"thyroid-rf", "thyroid RF counts vs RF metric row", {178, 20, 90, 2430}, Averaging::binary, true,
                   four(0.8990, 0.6642, 0.7639, 0.9595, 0.005)});
  cases.push_back({"thyroid-gbt", "thyroid GBT counts vs GBT metric row", {231, 23, 37, 2427}, Averaging::binary, true,
                   four(0.9094, 0.8619, 0.8851, 0.9779, 0.005)});
  cases.push_back({"thyroid-nn", "thyroid NN counts, no published metric row", {90, 18, 178, 2432}, Averaging::binary,
                   false, {}});
  cases.push_back({"ckd-nb", "CKD NB counts vs NB metric row (whole percent)", {6078, 2657, 1111, 6938},
                   Averaging::binary, true, four(0.70, 0.85, 0.76, 0.78, 0.01)});
  cases.push_back({"ckd-rf", "CKD RF counts vs RF metric row", ckd_perfect, Averaging::binary, true,
                   four(1.0, 1.0, 1.0, 1.0, 1e-12)});
  cases.push_back({"ckd-lr", "CKD LR: RF counts reused, LR row also perfect", ckd_perfect, Averaging::binary, true,
                   four(1.0, 1.0, 1.0, 1.0, 1e-12)});
  cases.push_back({"heart-lr", "heart LR counts vs LR accuracy", heart_lr, Averaging::binary, true,
                   {{"accuracy", 0.85, 0.01}}});
  cases.push_back({"heart-lr-binary", "heart LR precision/recall, positive class", heart_lr, Averaging::binary, false,
                   {{"precision", 0.85, 0.01}, {"recall", 0.83, 0.01}, {"f1", 0.84, 0.01}}});
  cases.push_back({"heart-lr-macro", "heart LR precision/recall, macro average", heart_lr, Averaging::macro, false,
                   {{"precision", 0.85, 0.01}, {"recall", 0.83, 0.01}, {"f1", 0.84, 0.01}}});
  cases.push_back({"heart-lr-weighted", "heart LR precision/recall, weighted average", heart_lr, Averaging::weighted,
                   false, {{"precision", 0.85, 0.01}, {"recall", 0.83, 0.01}, {"f1", 0.84, 0.01}}});
  cases.push_back({"heart-rf", "heart RF counts vs RF accuracy", heart_trees, Averaging::binary, true,
                   {{"accuracy", 0.96, 0.01}}});
  cases.push_back({"heart-gbt", "heart GBT counts (same as RF) vs GBT accuracy", heart_trees, Averaging::binary, true,
                   {{"accuracy", 0.96, 0.01}}});
  cases.push_back({"heart-trees-binary", "heart RF/GBT precision/recall, positive class", heart_trees,
                   Averaging::binary, false, {{"precision", 0.96, 0.01}, {"recall", 0.95, 0.01}, {"f1", 0.95, 0.01}}});
  return cases;
}

std::vector<GoldenOutcome> run_goldens(bool perturb) {
  std::vector<GoldenOutcome> out;
  for (auto c : golden_cases()) {
    if (perturb && c.gating) c.counts = perturbed(c.counts);
    GoldenOutcome o;
    const auto m = metrics_from_counts(c.counts, c.averaging);
    o.pass = true;
    for (const auto& e : c.expected) {
      GoldenCheck chk{e, pick(m, e.metric), false};
      chk.pass = chk.actual && std::fabs(*chk.actual - e.value) <= e.tolerance + 1e-12;
      o.pass = o.pass && chk.pass;
      o.checks.push_back(std::move(chk));
    }
    o.fixture = std::move(c);
    out.push_back(std::move(o));
  }
  return out;
}

bool goldens_pass(const std::vector<GoldenOutcome>& outcomes) noexcept {
  for (const auto& o : outcomes) {
    if (o.fixture.gating && !o.pass) return false;
  }
  return true;
}

std::string format_goldens(const std::vector<GoldenOutcome>& outcomes) {
  std::string s;
  std::size_t gating = 0, failed = 0;
  for (const auto& o : outcomes) {
    const auto& f = o.fixture;
    const char* status = o.pass ? "PASS" : (f.gating ? "FAIL" : "DIFF");
    if (f.gating) {
      ++gating;
      if (!o.pass) ++failed;
    }
    s += std::string(status) + " " + f.id + (f.gating ? "" : " (informational)") + ": " + f.source + "\n";
    s += "  counts tp=" + std::to_string(f.counts.tp) + " fp=" + std::to_string(f.counts.fp) +
         " fn=" + std::to_string(f.counts.fn) + " tn=" + std::to_string(f.counts.tn) + ", " +
         std::string(to_string(f.averaging)) + "\n";
    if (o.checks.empty()) {
      const auto m = metrics_from_counts(f.counts, f.averaging);
      s += "  precision " + percent_cell(m.precision) + ", recall " + percent_cell(m.recall) + ", f1 " +
           percent_cell(m.f1) + ", accuracy " + percent_cell(m.accuracy) + "\n";
    }
    for (const auto& c : o.checks) {
      s += "  " + c.expected.metric + ": expected " + fixed_decimals(c.expected.value, 4) + " +/- " +
           fixed_decimals(c.expected.tolerance, 4) + ", got " +
           (c.actual ? fixed_decimals(*c.actual, 4) : std::string("undefined"));
      if (!c.pass && c.actual) s += " (diff " + fixed_decimals(*c.actual - c.expected.value, 4) + ")";
      s += c.pass ? "\n" : "  <-- mismatch\n";
    }
  }
  s += std::to_string(gating - failed) + "/" + std::to_string(gating) + " gating fixtures pass\n";
  return s;
}

}  // namespace clinpred
