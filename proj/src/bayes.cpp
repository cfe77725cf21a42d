#include <algorithm>
#include <cmath>
#include <numbers>

#include "clinpred/errors.hpp"
#include "clinpred/models.hpp"

namespace clinpred {
namespace {

std::size_t level_slot(double x, std::size_t levels) noexcept {
  if (!(x >= 0.0) || x != std::floor(x) || x >= static_cast<double>(levels - 1)) return levels - 1;
  return static_cast<std::size_t>(x);
}

}  // namespace

std::pair<double, double> NaiveBayesModel::posteriors(std::span<const double> x) const noexcept {
  double logp[2] = {std::log(prior[0]), std::log(prior[1])};
  for (std::size_t j = 0; j < features.size(); ++j) {
    const auto& f = features[j];
    for (int c = 0; c < 2; ++c) {
      if (f.categorical) {
        const auto& table = f.frequencies[c];
        logp[c] += std::log(table[level_slot(x[j], table.size())]);
      } else {
        const double diff = x[j] - f.mean[c];
        logp[c] += -0.5 * std::log(2.0 * std::numbers::pi * f.variance[c]) - diff * diff / (2.0 * f.variance[c]);
      }
    }
  }
  const double delta = logp[1] - logp[0];
  return {sigmoid(-delta), sigmoid(delta)};
}

ScoreModel train_naive_bayes(const LabeledMatrix& train, const NbHyper& hp) {
  check_hyperparams(hp);
  train.check();
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();
  const std::size_t pos = train.positives();
  if (n == 0 || pos == 0 || pos == n) {
    throw PreconditionError("naive Bayes needs both classes in the training data");
  }
  std::vector<bool> categorical(d, false);
  for (const auto c : hp.categorical_columns) {
    if (c >= d) {
      throw ConfigError("naive Bayes categorical column " + std::to_string(c) + " is out of range (d=" +
                        std::to_string(d) + ")");
    }
    categorical[c] = true;
  }

  NaiveBayesModel m;
  m.hp = hp;
  const double count[2] = {static_cast<double>(n - pos), static_cast<double>(pos)};
  m.prior[0] = count[0] / static_cast<double>(n);
  m.prior[1] = count[1] / static_cast<double>(n);
  m.features.resize(d);

  for (std::size_t j = 0; j < d; ++j) {
    auto& f = m.features[j];
    f.categorical = categorical[j];
    if (f.categorical) {
      std::size_t max_index = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = train.features(i, j);
        if (v < 0.0 || v != std::floor(v)) {
          throw PreconditionError("naive Bayes column " + std::to_string(j) +
                                  " is marked categorical but holds a non-index value");
        }
        max_index = std::max(max_index, static_cast<std::size_t>(v));
      }
      // One extra slot catches indices never seen in training.
      const std::size_t levels = max_index + 2;
      for (int c = 0; c < 2; ++c) f.frequencies[c].assign(levels, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        f.frequencies[train.labels[i]][static_cast<std::size_t>(train.features(i, j))] += 1.0;
      }
      for (int c = 0; c < 2; ++c) {
        const double denom = count[c] + hp.alpha * static_cast<double>(levels);
        for (auto& v : f.frequencies[c]) v = (v + hp.alpha) / denom;
      }
    } else {
      double sum[2] = {0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) sum[train.labels[i]] += train.features(i, j);
      for (int c = 0; c < 2; ++c) f.mean[c] = sum[c] / count[c];
      double sq[2] = {0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        const int c = train.labels[i];
        const double diff = train.features(i, j) - f.mean[c];
        sq[c] += diff * diff;
      }
      for (int c = 0; c < 2; ++c) f.variance[c] = std::max(sq[c] / count[c], hp.variance_floor);
    }
  }
  return ScoreModel(std::move(m));
}

}  // namespace clinpred
