#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clinpred/dataset.hpp"
#include "clinpred/models.hpp"
#include "clinpred/rng.hpp"

namespace clinpred::detail {

enum class Criterion { gini, variance };

struct GrowOptions {
  Criterion criterion = Criterion::gini;
  int max_depth = 8;
  int min_samples_leaf = 1;
  std::size_t m_try = 0;  // 0 or >= d: every feature at every split
};

/// Per-row targets. Gini trees read `labels`; variance trees read `residual`
/// and `hessian` (leaf value = sum residual / sum hessian).
struct GrowTargets {
  std::span<const int> labels;
  std::span<const double> residual;
  std::span<const double> hessian;
};

struct GrownTree {
  Tree tree;
  std::vector<double> importance;  // sum over splits of n_node * gain
};

/// Grows one tree over `rows` (may repeat for bootstrap samples). `rng` is
/// only consulted when m_try < d.
GrownTree grow_tree(const Matrix& x, const GrowTargets& targets, std::vector<std::size_t> rows,
                    const GrowOptions& opt, SplitMix64* rng);

/// Best split of `rows` over `features`, scanned in the given order; a later
/// candidate wins only with strictly larger gain.
SplitChoice find_split(const Matrix& x, const GrowTargets& targets, std::span<const std::size_t> rows,
                       std::span<const std::size_t> features, Criterion criterion, int min_samples_leaf);

}  // namespace clinpred::detail
