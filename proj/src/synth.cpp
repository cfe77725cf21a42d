#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "clinpred/errors.hpp"
#include "clinpred/ingest.hpp"
#include "clinpred/rng.hpp"
#include "profiles.hpp"

namespace clinpred {

void SynthSpec::check() const {
  if (n_rows == 0) throw ValidationError("synth n_rows must be positive");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    throw ValidationError("synth signal_strength must lie in [0, 1]");
  }
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
    throw ValidationError("synth positive_rate must lie in (0, 1)");
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw ValidationError("synth missing_rate must lie in [0, 1)");
  }
}

double default_positive_rate(DiseaseId id) noexcept {
  switch (id) {
    case DiseaseId::heart:
      return 0.51;
    case DiseaseId::thyroid:
      return 268.0 / 2718.0;
    case DiseaseId::diabetes:
      return 0.085;
    case DiseaseId::ckd:
      return 0.42;
  }
  return 0.5;
}

namespace {

using detail::ColumnProfile;
using detail::Generator;

double normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double truncated_mean(double mu, double sigma, double lo, double hi) noexcept {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double z = normal_cdf(b) - normal_cdf(a);
  if (z <= 0.0) return std::clamp(mu, lo, hi);
  return mu + sigma * (normal_pdf(a) - normal_pdf(b)) / z;
}

// Location inside [lo, hi] whose truncated normal has the requested mean; the
// truncated mean is increasing in the location so bisection converges.
double solve_location(double target, double sigma, double lo, double hi) noexcept {
  double a = lo;
  double b = hi;
  if (truncated_mean(a, sigma, lo, hi) >= target) return a;
  if (truncated_mean(b, sigma, lo, hi) <= target) return b;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (truncated_mean(m, sigma, lo, hi) < target ? a : b) = m;
  }
  return 0.5 * (a + b);
}

// Exponential tilt of discrete weights; lambda = shift / sigma moves the mean
// of the level index by roughly `shift` standard deviations.
std::vector<double> tilted(const std::vector<double>& weights, double shift) {
  const std::size_t k = weights.size();
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    total += weights[i];
    mean += weights[i] * static_cast<double>(i);
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i) var += weights[i] * std::pow(static_cast<double>(i) - mean, 2);
  var /= total;
  std::vector<double> out(weights);
  if (shift == 0.0 || var <= 0.0) return out;
  const double lambda = shift / std::sqrt(var);
  for (std::size_t i = 0; i < k; ++i) out[i] *= std::exp(lambda * (static_cast<double>(i) - mean));
  return out;
}

std::size_t draw_index(SplitMix64& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (const double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

// Class-conditional sampler for one column, precomputed once per call.
struct ColumnSampler {
  const ColumnProfile* profile = nullptr;
  double sigma = 1.0;
  double location[2] = {0.0, 0.0};
  double prob[2] = {0.5, 0.5};
  std::vector<double> weights[2];

  ColumnSampler(const ColumnProfile& p, double signal) : profile(&p) {
    const double shift = signal * p.direction;
    switch (p.gen) {
      case Generator::gaussian: {
        sigma = p.std > 0.0 ? p.std : (p.max - p.min) / 6.0;
        location[0] = solve_location(p.mean, sigma, p.min, p.max);
        location[1] = location[0] + shift * sigma;
        break;
      }
      case Generator::bernoulli:
        prob[0] = p.p;
        prob[1] = std::clamp(p.p + shift * std::sqrt(p.p * (1.0 - p.p)), 0.01, 0.99);
        break;
      case Generator::levels:
      case Generator::categorical:
        weights[0] = p.weights;
        weights[1] = tilted(p.weights, shift);
        break;
      case Generator::identifier:
      case Generator::target:
        break;
    }
  }

  Cell draw(SplitMix64& rng, int label, std::size_t row) const {
    const auto& p = *profile;
    switch (p.gen) {
      case Generator::gaussian: {
        double x = location[label];
        bool accepted = false;
        for (int attempt = 0; attempt < 10000 && !accepted; ++attempt) {
          x = location[label] + sigma * rng.normal();
          accepted = x >= p.min && x <= p.max;
        }
        if (!accepted) x = std::clamp(x, p.min, p.max);
        if (p.integer) x = std::clamp(std::round(x), std::ceil(p.min), std::floor(p.max));
        return x;
      }
      case Generator::bernoulli:
        return rng.uniform() < prob[label] ? 1.0 : 0.0;
      case Generator::levels:
        return p.values[draw_index(rng, weights[label])];
      case Generator::categorical:
        return p.tokens[draw_index(rng, weights[label])];
      case Generator::identifier:
        return static_cast<double>(row + 1);
      case Generator::target:
        if (p.spec.kind == ColumnKind::categorical) return std::string(label == 1 ? "1" : "0");
        return static_cast<double>(label);
    }
    return Missing{};
  }
};

}  // namespace

Table synthesize(DiseaseId id, const SynthSpec& spec) {
  spec.check();
  const auto& profile = detail::disease_profile(id);
  std::vector<ColumnSampler> samplers;
  samplers.reserve(profile.size());
  for (const auto& p : profile) samplers.emplace_back(p, spec.signal_strength);

  SplitMix64 rng(derive_seed(spec.seed, "synth." + std::string(to_string(id))));
  std::vector<Row> rows;
  rows.reserve(spec.n_rows);
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    const int label = rng.uniform() < spec.positive_rate ? 1 : 0;
    Row row;
    row.reserve(profile.size());
    for (std::size_t c = 0; c < profile.size(); ++c) {
      Cell cell = samplers[c].draw(rng, label, r);
      if (spec.missing_rate > 0.0 && profile[c].spec.role == ColumnRole::feature &&
          rng.uniform() < spec.missing_rate) {
        cell = Missing{};
      }
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return Table(builtin_schema(id), std::move(rows));
}

}  // namespace clinpred
