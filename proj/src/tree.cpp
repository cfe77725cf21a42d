#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clinpred/errors.hpp"
#include "clinpred/models.hpp"
#include "tree_builder.hpp"

namespace clinpred {

double gini(double p) noexcept { return 2.0 * p * (1.0 - p); }

double Tree::predict(std::span<const double> x) const noexcept {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

int Tree::depth() const noexcept {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

void Tree::check(std::size_t n_features) const {
  const std::size_t n = nodes.size();
  if (n == 0) throw ArtifactFormatError("tree has no nodes");
  // end[i] is one past the last node of the subtree rooted at i.
  std::vector<std::size_t> end(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    const auto& node = nodes[k];
    if (!std::isfinite(node.value) || !std::isfinite(node.threshold)) {
      throw ArtifactFormatError("tree node " + std::to_string(k) + " holds a non-finite number");
    }
    if (node.is_leaf()) {
      end[k] = k + 1;
      continue;
    }
    if (static_cast<std::size_t>(node.feature) >= n_features) {
      throw ArtifactFormatError("tree node " + std::to_string(k) + " splits on feature " +
                                std::to_string(node.feature) + " of " + std::to_string(n_features));
    }
    if (node.left != static_cast<int>(k + 1) || node.right < 0 || static_cast<std::size_t>(node.right) >= n ||
        static_cast<std::size_t>(node.right) != end[k + 1]) {
      throw ArtifactFormatError("tree node " + std::to_string(k) + " has invalid child links");
    }
    end[k] = end[static_cast<std::size_t>(node.right)];
  }
  if (end[0] != n) throw ArtifactFormatError("tree contains unreachable nodes");
}

namespace detail {
namespace {

struct Acc {
  double count = 0.0;
  double pos = 0.0;  // gini: positives; variance: residual sum
  double hess = 0.0;
};

void add(Acc& a, const GrowTargets& t, std::size_t r, Criterion c) {
  a.count += 1.0;
  if (c == Criterion::gini) {
    a.pos += t.labels[r];
  } else {
    a.pos += t.residual[r];
    a.hess += t.hessian[r];
  }
}

Acc accumulate(const GrowTargets& t, std::span<const std::size_t> rows, Criterion c) {
  Acc a;
  for (const auto r : rows) add(a, t, r, c);
  return a;
}

double gain_of(const Acc& parent, const Acc& left, Criterion c) {
  const Acc right{parent.count - left.count, parent.pos - left.pos, parent.hess - left.hess};
  if (c == Criterion::gini) {
    const double n = parent.count;
    return gini(parent.pos / n) - left.count / n * gini(left.pos / left.count) -
           right.count / n * gini(right.pos / right.count);
  }
  return left.pos * left.pos / left.count + right.pos * right.pos / right.count -
         parent.pos * parent.pos / parent.count;
}

double midpoint(double a, double b) {
  const double m = 0.5 * a + 0.5 * b;
  return (m >= a && m < b) ? m : a;
}

double leaf_value(const Acc& a, Criterion c) {
  if (c == Criterion::gini) return a.pos / a.count;
  return a.pos / std::max(a.hess, 1e-12);
}

struct Grower {
  const Matrix& x;
  const GrowTargets& targets;
  const GrowOptions& opt;
  SplitMix64* rng;
  std::vector<std::size_t> all_features;
  GrownTree out;

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = all_features.size();
    if (opt.m_try == 0 || opt.m_try >= d || rng == nullptr) return all_features;
    std::vector<std::size_t> pool = all_features;
    for (std::size_t i = 0; i < opt.m_try; ++i) {
      const auto j = i + static_cast<std::size_t>(rng->below(d - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(opt.m_try);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  void grow(const std::vector<std::size_t>& rows, int depth) {
    const std::size_t self = out.tree.nodes.size();
    out.tree.nodes.emplace_back();
    const Acc acc = accumulate(targets, rows, opt.criterion);
    out.tree.nodes[self].value = leaf_value(acc, opt.criterion);

    if (depth >= opt.max_depth) return;
    if (rows.size() < 2 * static_cast<std::size_t>(opt.min_samples_leaf)) return;
    if (opt.criterion == Criterion::gini && (acc.pos == 0.0 || acc.pos == acc.count)) return;

    const auto features = candidate_features();
    const SplitChoice s = find_split(x, targets, rows, features, opt.criterion, opt.min_samples_leaf);
    if (!s.found) return;
    if (opt.criterion == Criterion::variance && !(s.gain > 0.0)) return;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const auto r : rows) (x(r, s.feature) <= s.threshold ? left : right).push_back(r);

    out.importance[s.feature] += static_cast<double>(rows.size()) * std::max(s.gain, 0.0);
    out.tree.nodes[self].feature = static_cast<int>(s.feature);
    out.tree.nodes[self].threshold = s.threshold;

    out.tree.nodes[self].left = static_cast<int>(out.tree.nodes.size());
    grow(left, depth + 1);
    out.tree.nodes[self].right = static_cast<int>(out.tree.nodes.size());
    grow(right, depth + 1);
  }
};

}  // namespace

SplitChoice find_split(const Matrix& x, const GrowTargets& targets, std::span<const std::size_t> rows,
                       std::span<const std::size_t> features, Criterion criterion, int min_samples_leaf) {
  SplitChoice best;
  best.gain = -std::numeric_limits<double>::infinity();
  const Acc parent = accumulate(targets, rows, criterion);
  const auto msl = static_cast<std::size_t>(std::max(min_samples_leaf, 1));
  const std::size_t n = rows.size();
  std::vector<std::size_t> order(rows.begin(), rows.end());

  for (const auto f : features) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    Acc left;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      add(left, targets, order[i], criterion);
      const double a = x(order[i], f);
      const double b = x(order[i + 1], f);
      if (!(a < b)) continue;
      if (i + 1 < msl || n - (i + 1) < msl) continue;
      const double g = gain_of(parent, left, criterion);
      if (!best.found || g > best.gain + 1e-12) {
        best.found = true;
        best.feature = f;
        best.threshold = midpoint(a, b);
        best.gain = g;
      }
    }
  }
  if (!best.found) best.gain = 0.0;
  return best;
}

GrownTree grow_tree(const Matrix& x, const GrowTargets& targets, std::vector<std::size_t> rows,
                    const GrowOptions& opt, SplitMix64* rng) {
  Grower g{x, targets, opt, rng, {}, {}};
  g.all_features.resize(x.cols());
  std::iota(g.all_features.begin(), g.all_features.end(), std::size_t{0});
  g.out.importance.assign(x.cols(), 0.0);
  g.grow(rows, 0);
  return std::move(g.out);
}

}  // namespace detail

namespace {

void require_rows(const LabeledMatrix& train, const char* what) {
  train.check();
  if (train.rows() == 0) throw PreconditionError(std::string(what) + " needs at least one training row");
}

void require_both_classes(const LabeledMatrix& train, const char* what) {
  require_rows(train, what);
  const auto pos = train.positives();
  if (pos == 0 || pos == train.rows()) {
    throw PreconditionError(std::string(what) + " needs both classes in the training data");
  }
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

SplitChoice best_gini_split(const LabeledMatrix& data, int min_samples_leaf) {
  require_rows(data, "split search");
  std::vector<std::size_t> features(data.cols());
  std::iota(features.begin(), features.end(), std::size_t{0});
  const detail::GrowTargets t{data.labels, {}, {}};
  return detail::find_split(data.features, t, all_rows(data.rows()), features, detail::Criterion::gini,
                            min_samples_leaf);
}

ScoreModel train_tree(const LabeledMatrix& train, const TreeHyper& hp) {
  check_hyperparams(hp);
  require_rows(train, "decision tree");
  const detail::GrowTargets t{train.labels, {}, {}};
  const detail::GrowOptions opt{detail::Criterion::gini, hp.max_depth, hp.min_samples_leaf, 0};
  auto grown = detail::grow_tree(train.features, t, all_rows(train.rows()), opt, nullptr);
  return ScoreModel(TreeModel{hp, train.cols(), std::move(grown.tree)});
}

ScoreModel train_forest(const LabeledMatrix& train, const ForestHyper& hp, Execution exec) {
  check_hyperparams(hp);
  require_rows(train, "random forest");
  const std::size_t d = train.cols();
  const std::size_t n = train.rows();
  ForestModel model;
  model.hp = hp;
  model.n_features = d;
  model.m_try = hp.m_try > 0 ? std::min(hp.m_try, static_cast<int>(d))
                             : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
  model.m_try = std::max(model.m_try, 1);

  const auto n_trees = static_cast<std::size_t>(hp.n_trees);
  model.tree_seeds.resize(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) model.tree_seeds[t] = derive_seed(hp.seed, std::uint64_t{t});

  std::vector<detail::GrownTree> grown(n_trees);
  const detail::GrowTargets targets{train.labels, {}, {}};
  const detail::GrowOptions opt{detail::Criterion::gini, hp.max_depth, hp.min_samples_leaf,
                                static_cast<std::size_t>(model.m_try)};
  parallel_for(n_trees, exec.workers, [&](std::size_t t) {
    SplitMix64 rng(model.tree_seeds[t]);
    std::vector<std::size_t> rows;
    if (hp.bootstrap) {
      rows.resize(n);
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      rows = all_rows(n);
    }
    grown[t] = detail::grow_tree(train.features, targets, std::move(rows), opt, &rng);
  });

  model.importances.assign(d, 0.0);
  model.trees.reserve(n_trees);
  for (auto& g : grown) {
    for (std::size_t f = 0; f < d; ++f) model.importances[f] += g.importance[f];
    model.trees.push_back(std::move(g.tree));
  }
  const double total = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
  for (auto& v : model.importances) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(d);
  return ScoreModel(std::move(model));
}

double GbtModel::margin(std::span<const double> x) const noexcept {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return base_score + hp.learning_rate * sum;
}

ScoreModel train_gbt(const LabeledMatrix& train, const GbtHyper& hp) {
  check_hyperparams(hp);
  require_both_classes(train, "gradient boosting");
  const std::size_t n = train.rows();
  GbtModel model;
  model.hp = hp;
  model.n_features = train.cols();
  const double p = static_cast<double>(train.positives()) / static_cast<double>(n);
  model.base_score = std::log(p / (1.0 - p));

  // sum_trees[i] accumulates raw tree outputs in round order, matching margin().
  std::vector<double> sum_trees(n, 0.0);
  std::vector<double> prob(n);
  std::vector<double> residual(n);
  std::vector<double> hessian(n);
  const auto refresh = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      prob[i] = sigmoid(model.base_score + hp.learning_rate * sum_trees[i]);
    }
    model.train_loss.push_back(mean_log_loss(prob, train.labels));
  };
  refresh();

  const detail::GrowOptions opt{detail::Criterion::variance, hp.max_depth, hp.min_samples_leaf, 0};
  const auto rows = all_rows(n);
  for (int round = 0; round < hp.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = train.labels[i] - prob[i];
      hessian[i] = prob[i] * (1.0 - prob[i]);
    }
    const detail::GrowTargets t{train.labels, residual, hessian};
    auto grown = detail::grow_tree(train.features, t, rows, opt, nullptr);
    for (std::size_t i = 0; i < n; ++i) sum_trees[i] += grown.tree.predict(train.features.row(i));
    model.trees.push_back(std::move(grown.tree));
    refresh();
  }
  return ScoreModel(std::move(model));
}

}  // namespace clinpred
