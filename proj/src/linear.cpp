#include <algorithm>
#include <cmath>
#include <numeric>

#include "clinpred/errors.hpp"
#include "clinpred/models.hpp"
#include "clinpred/rng.hpp"

namespace clinpred {

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double mean_log_loss(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.size() != labels.size()) {
    throw LengthMismatchError("log-loss: " + std::to_string(probabilities.size()) + " scores vs " +
                              std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) return 0.0;
  constexpr double eps = 1e-15;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probabilities[i], eps, 1.0 - eps);
    sum -= labels[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return sum / static_cast<double>(labels.size());
}

namespace {

/// log(1 + e^z) without overflow.
double softplus(double z) noexcept { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  explicit Standardizer(const Matrix& x) : mean(x.cols(), 0.0), scale(x.cols(), 1.0) {
    const auto n = static_cast<double>(x.rows());
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, j);
      mean[j] = s / n;
      double v = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) v += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
      const double sd = std::sqrt(v / n);
      scale[j] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
    }
  }

  Matrix apply(const Matrix& x) const {
    Matrix z(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) = (x(i, j) - mean[j]) / scale[j];
    }
    return z;
  }
};

void require_rows(const LabeledMatrix& train, const char* what) {
  train.check();
  if (train.rows() == 0) throw PreconditionError(std::string(what) + " needs at least one training row");
}

// Loss and gradient of logistic regression; penalty weight for w[j] is l2 * pen[j].
double logistic_eval(const Matrix& x, std::span<const int> y, std::span<const double> w, double b, double l2,
                     std::span<const double> pen, std::vector<double>& gw, double& gb) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  gw.assign(d, 0.0);
  gb = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    loss += softplus(z) - y[i] * z;
    const double r = sigmoid(z) - y[i];
    for (std::size_t j = 0; j < d; ++j) gw[j] += r * row[j];
    gb += r;
  }
  const auto nd = static_cast<double>(n);
  loss /= nd;
  gb /= nd;
  for (std::size_t j = 0; j < d; ++j) {
    gw[j] = gw[j] / nd + l2 * pen[j] * w[j];
    loss += 0.5 * l2 * pen[j] * w[j] * w[j];
  }
  return loss;
}

}  // namespace

LogisticGradient logistic_loss_gradient(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                                        double bias, double l2) {
  if (weights.size() != x.cols()) throw DimensionError(x.cols(), weights.size());
  if (y.size() != x.rows()) throw LengthMismatchError("gradient: labels do not match rows");
  const std::vector<double> pen(x.cols(), 1.0);
  LogisticGradient g;
  g.loss = logistic_eval(x, y, weights, bias, l2, pen, g.weights, g.bias);
  return g;
}

ScoreModel train_logistic(const LabeledMatrix& train, const LrHyper& hp) {
  check_hyperparams(hp);
  require_rows(train, "logistic regression");
  const auto pos = train.positives();
  if (pos == 0 || pos == train.rows()) {
    throw PreconditionError("logistic regression needs both classes in the training data");
  }
  // Gradient descent runs on standardized columns; the fitted weights are
  // mapped back so the model scores raw feature rows.
  const Standardizer st(train.features);
  const Matrix z = st.apply(train.features);
  const std::size_t d = train.cols();
  std::vector<double> pen(d);
  for (std::size_t j = 0; j < d; ++j) pen[j] = 1.0 / (st.scale[j] * st.scale[j]);

  std::vector<double> v(d, 0.0);
  double c = 0.0;
  std::vector<double> gv;
  double gc = 0.0;
  double loss = logistic_eval(z, train.labels, v, c, hp.l2, pen, gv, gc);
  int iterations = 0;
  for (int it = 0; it < hp.max_iters; ++it) {
    for (std::size_t j = 0; j < d; ++j) v[j] -= hp.learning_rate * gv[j];
    c -= hp.learning_rate * gc;
    const double next = logistic_eval(z, train.labels, v, c, hp.l2, pen, gv, gc);
    iterations = it + 1;
    if (!std::isfinite(next)) {
      throw DivergenceError("logistic regression diverged at iteration " + std::to_string(iterations) +
                            "; try a smaller learning_rate");
    }
    if (next > loss + 1e-9 * std::max(1.0, loss)) {
      throw DivergenceError("logistic regression loss rose at iteration " + std::to_string(iterations) +
                            "; try a smaller learning_rate");
    }
    const double improvement = loss - next;
    loss = next;
    if (improvement < hp.tolerance) break;
  }

  LogisticModel m;
  m.hp = hp;
  m.weights.resize(d);
  m.bias = c;
  for (std::size_t j = 0; j < d; ++j) {
    m.weights[j] = v[j] / st.scale[j];
    m.bias -= v[j] * st.mean[j] / st.scale[j];
  }
  m.final_loss = loss;
  m.iterations = iterations;
  return ScoreModel(std::move(m));
}

// ---------------------------------------------------------------------------
// Multilayer perceptron
// ---------------------------------------------------------------------------

double MlpModel::forward(std::span<const double> x) const noexcept {
  double out = b2;
  for (std::size_t k = 0; k < hidden; ++k) {
    double a = b1[k];
    for (std::size_t j = 0; j < inputs; ++j) a += x[j] * w1[j * hidden + k];
    if (a > 0.0) out += a * w2[k];
  }
  return out;
}

namespace {

// Mean loss and gradient over `rows`; w1[j, k] is penalized by l2 * pen[j].
MlpGradient mlp_eval(const MlpModel& m, const Matrix& x, std::span<const int> y,
                     std::span<const std::size_t> rows, double l2, std::span<const double> pen) {
  const std::size_t d = m.inputs;
  const std::size_t h = m.hidden;
  MlpGradient g;
  g.w1.assign(d * h, 0.0);
  g.b1.assign(h, 0.0);
  g.w2.assign(h, 0.0);
  std::vector<double> act(h);
  for (const auto i : rows) {
    const auto row = x.row(i);
    double z = m.b2;
    for (std::size_t k = 0; k < h; ++k) {
      double a = m.b1[k];
      for (std::size_t j = 0; j < d; ++j) a += row[j] * m.w1[j * h + k];
      act[k] = a > 0.0 ? a : 0.0;
      z += act[k] * m.w2[k];
    }
    g.loss += softplus(z) - y[i] * z;
    const double r = sigmoid(z) - y[i];
    g.b2 += r;
    for (std::size_t k = 0; k < h; ++k) {
      g.w2[k] += r * act[k];
      if (act[k] <= 0.0) continue;
      const double delta = r * m.w2[k];
      g.b1[k] += delta;
      for (std::size_t j = 0; j < d; ++j) g.w1[j * h + k] += delta * row[j];
    }
  }
  const auto n = static_cast<double>(rows.size());
  g.loss /= n;
  g.b2 /= n;
  for (auto& v : g.b1) v /= n;
  for (std::size_t k = 0; k < h; ++k) {
    g.w2[k] = g.w2[k] / n + l2 * m.w2[k];
    g.loss += 0.5 * l2 * m.w2[k] * m.w2[k];
  }
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < h; ++k) {
      const double w = m.w1[j * h + k];
      g.w1[j * h + k] = g.w1[j * h + k] / n + l2 * pen[j] * w;
      g.loss += 0.5 * l2 * pen[j] * w * w;
    }
  }
  return g;
}

bool all_finite(const MlpModel& m) {
  const auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return ok(m.w1) && ok(m.b1) && ok(m.w2) && std::isfinite(m.b2);
}

}  // namespace

MlpGradient mlp_loss_gradient(const MlpModel& model, const Matrix& x, std::span<const int> y) {
  if (x.cols() != model.inputs) throw DimensionError(model.inputs, x.cols());
  if (y.size() != x.rows()) throw LengthMismatchError("gradient: labels do not match rows");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const std::vector<double> pen(model.inputs, 1.0);
  return mlp_eval(model, x, y, rows, model.hp.l2, pen);
}

ScoreModel train_mlp(const LabeledMatrix& train, const MlpHyper& hp) {
  check_hyperparams(hp);
  require_rows(train, "neural network");
  const Standardizer st(train.features);
  const Matrix z = st.apply(train.features);
  const std::size_t d = train.cols();
  const auto h = static_cast<std::size_t>(hp.hidden);
  std::vector<double> pen(d);
  for (std::size_t j = 0; j < d; ++j) pen[j] = 1.0 / (st.scale[j] * st.scale[j]);

  MlpModel m;
  m.hp = hp;
  m.inputs = d;
  m.hidden = h;
  m.w1.resize(d * h);
  m.b1.assign(h, 0.0);
  m.w2.resize(h);
  SplitMix64 init(derive_seed(hp.seed, "mlp.init"));
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d + h));
  for (auto& w : m.w1) w = init.uniform(-lim1, lim1);
  const double lim2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  for (auto& w : m.w2) w = init.uniform(-lim2, lim2);

  SplitMix64 order_rng(derive_seed(hp.seed, "mlp.order"));
  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(hp.batch_size);
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const auto len = std::min(batch, order.size() - start);
      const auto g = mlp_eval(m, z, train.labels, std::span<const std::size_t>(order).subspan(start, len),
                              hp.l2, pen);
      if (!std::isfinite(g.loss)) {
        throw DivergenceError("neural network diverged in epoch " + std::to_string(epoch + 1) +
                              "; try a smaller learning_rate");
      }
      for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= hp.learning_rate * g.w1[i];
      for (std::size_t k = 0; k < h; ++k) {
        m.b1[k] -= hp.learning_rate * g.b1[k];
        m.w2[k] -= hp.learning_rate * g.w2[k];
      }
      m.b2 -= hp.learning_rate * g.b2;
    }
    if (!all_finite(m)) {
      throw DivergenceError("neural network diverged in epoch " + std::to_string(epoch + 1) +
                            "; try a smaller learning_rate");
    }
  }

  for (std::size_t k = 0; k < h; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      const double w = m.w1[j * h + k];
      m.b1[k] -= w * st.mean[j] / st.scale[j];
      m.w1[j * h + k] = w / st.scale[j];
    }
  }
  return ScoreModel(std::move(m));
}

}  // namespace clinpred
