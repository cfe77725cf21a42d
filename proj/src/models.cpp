#include <cmath>
#include <sstream>

#include "clinpred/artifact.hpp"
#include "clinpred/errors.hpp"
#include "clinpred/models.hpp"

namespace clinpred {

namespace {

constexpr std::pair<ModelKind, std::string_view> kKindNames[] = {
    {ModelKind::lr, "lr"}, {ModelKind::dt, "dt"}, {ModelKind::rf, "rf"},
    {ModelKind::gbt, "gbt"}, {ModelKind::nb, "nb"}, {ModelKind::nn, "nn"},
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ConfigError("unknown model kind '" + std::string(text) + "' (expected lr, dt, rf, gbt, nb or nn)");
}

std::string_view display_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::lr: return "LR";
    case ModelKind::dt: return "DT";
    case ModelKind::rf: return "RF";
    case ModelKind::gbt: return "GBT";
    case ModelKind::nb: return "NB";
    case ModelKind::nn: return "NN";
  }
  return "?";
}

Hyperparams default_hyperparams(ModelKind kind) {
  switch (kind) {
    case ModelKind::lr: return LrHyper{};
    case ModelKind::dt: return TreeHyper{};
    case ModelKind::rf: return ForestHyper{};
    case ModelKind::gbt: return GbtHyper{};
    case ModelKind::nb: return NbHyper{};
    case ModelKind::nn: return MlpHyper{};
  }
  return LrHyper{};
}

ModelKind kind_of(const Hyperparams& hp) noexcept {
  return std::visit(overloaded{
                        [](const LrHyper&) { return ModelKind::lr; },
                        [](const TreeHyper&) { return ModelKind::dt; },
                        [](const ForestHyper&) { return ModelKind::rf; },
                        [](const GbtHyper&) { return ModelKind::gbt; },
                        [](const NbHyper&) { return ModelKind::nb; },
                        [](const MlpHyper&) { return ModelKind::nn; },
                    },
                    hp);
}

namespace {

void need(bool ok, std::string_view field, const std::string& rule, double got) {
  if (ok) return;
  std::ostringstream msg;
  msg << "hyperparameter '" << field << "' must be " << rule << " (got " << got << ")";
  throw ConfigError(msg.str());
}

void positive(double v, std::string_view field) { need(std::isfinite(v) && v > 0.0, field, "> 0", v); }
void nonnegative(double v, std::string_view field) { need(std::isfinite(v) && v >= 0.0, field, ">= 0", v); }
void at_least(int v, int lo, std::string_view field) { need(v >= lo, field, ">= " + std::to_string(lo), v); }

}  // namespace

void check_hyperparams(const Hyperparams& hp) {
  std::visit(overloaded{
                 [](const LrHyper& h) {
                   positive(h.learning_rate, "learning_rate");
                   at_least(h.max_iters, 1, "max_iters");
                   positive(h.tolerance, "tolerance");
                   nonnegative(h.l2, "l2");
                 },
                 [](const TreeHyper& h) {
                   at_least(h.max_depth, 1, "max_depth");
                   at_least(h.min_samples_leaf, 1, "min_samples_leaf");
                 },
                 [](const ForestHyper& h) {
                   at_least(h.n_trees, 1, "n_trees");
                   at_least(h.m_try, 0, "m_try");
                   at_least(h.max_depth, 1, "max_depth");
                   at_least(h.min_samples_leaf, 1, "min_samples_leaf");
                 },
                 [](const GbtHyper& h) {
                   at_least(h.n_trees, 0, "n_trees");
                   positive(h.learning_rate, "learning_rate");
                   at_least(h.max_depth, 1, "max_depth");
                   at_least(h.min_samples_leaf, 1, "min_samples_leaf");
                 },
                 [](const NbHyper& h) {
                   positive(h.alpha, "alpha");
                   positive(h.variance_floor, "variance_floor");
                 },
                 [](const MlpHyper& h) {
                   at_least(h.hidden, 1, "hidden");
                   positive(h.learning_rate, "learning_rate");
                   at_least(h.epochs, 1, "epochs");
                   at_least(h.batch_size, 1, "batch_size");
                   nonnegative(h.l2, "l2");
                 },
             },
             hp);
}

ModelKind ScoreModel::kind() const noexcept {
  return static_cast<ModelKind>(params_.index());
}

ScoreSemantics ScoreModel::semantics() const noexcept {
  if (const auto* g = std::get_if<GbtModel>(&params_); g != nullptr && g->hp.raw_margin) {
    return ScoreSemantics::margin;
  }
  return ScoreSemantics::probability;
}

std::size_t ScoreModel::input_dim() const noexcept {
  return std::visit(overloaded{
                        [](const LogisticModel& m) { return m.weights.size(); },
                        [](const TreeModel& m) { return m.n_features; },
                        [](const ForestModel& m) { return m.n_features; },
                        [](const GbtModel& m) { return m.n_features; },
                        [](const NaiveBayesModel& m) { return m.features.size(); },
                        [](const MlpModel& m) { return m.inputs; },
                    },
                    params_);
}

ScoreModel train_model(const LabeledMatrix& train, const Hyperparams& hp, Execution exec) {
  return std::visit(overloaded{
                        [&](const LrHyper& h) { return train_logistic(train, h); },
                        [&](const TreeHyper& h) { return train_tree(train, h); },
                        [&](const ForestHyper& h) { return train_forest(train, h, exec); },
                        [&](const GbtHyper& h) { return train_gbt(train, h); },
                        [&](const NbHyper& h) { return train_naive_bayes(train, h); },
                        [&](const MlpHyper& h) { return train_mlp(train, h); },
                    },
                    hp);
}

namespace {

double score_row(const ScoreModel::Params& params, std::span<const double> x) {
  return std::visit(overloaded{
                        [&](const LogisticModel& m) {
                          double z = m.bias;
                          for (std::size_t j = 0; j < x.size(); ++j) z += m.weights[j] * x[j];
                          return sigmoid(z);
                        },
                        [&](const TreeModel& m) { return m.tree.predict(x); },
                        [&](const ForestModel& m) {
                          double sum = 0.0;
                          for (const auto& t : m.trees) sum += t.predict(x);
                          return sum / static_cast<double>(m.trees.size());
                        },
                        [&](const GbtModel& m) {
                          const double z = m.margin(x);
                          return m.hp.raw_margin ? z : sigmoid(z);
                        },
                        [&](const NaiveBayesModel& m) { return m.posteriors(x).second; },
                        [&](const MlpModel& m) { return sigmoid(m.forward(x)); },
                    },
                    params);
}

}  // namespace

std::vector<double> predict_scores(const ScoreModel& model, const Matrix& x, Execution exec) {
  if (x.cols() != model.input_dim()) throw DimensionError(model.input_dim(), x.cols());
  std::vector<double> out(x.rows());
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (x.rows() + kBlock - 1) / kBlock;
  parallel_for(blocks, exec.workers, [&](std::size_t b) {
    const std::size_t end = std::min(x.rows(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) out[i] = score_row(model.params(), x.row(i));
  });
  return out;
}

std::vector<double> predict_probabilities(const ScoreModel& model, const Matrix& x, Execution exec) {
  auto out = predict_scores(model, x, exec);
  if (model.semantics() == ScoreSemantics::margin) {
    for (auto& v : out) v = sigmoid(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put_list(ArtifactWriter& out, std::string_view key, const std::vector<T>& values) {
  auto line = out.put(key);
  line << values.size();
  for (const auto& v : values) line << v;
}

void write_tree(ArtifactWriter& out, const Tree& tree) {
  out.put("tree") << tree.nodes.size();
  for (const auto& n : tree.nodes) {
    out.put("node") << n.feature << n.threshold << n.left << n.right << n.value;
  }
}

Tree read_tree(ArtifactReader& in, std::size_t n_features, bool probability_leaves) {
  const auto count = in.unsigned_integer("tree");
  if (count == 0 || count > (1u << 26)) in.fail("implausible tree size " + std::to_string(count));
  Tree t;
  t.nodes.resize(count);
  for (auto& n : t.nodes) {
    const auto tok = in.next("node", 5);
    const auto feature = ArtifactReader::to_integer(tok[0]);
    const auto left = ArtifactReader::to_integer(tok[2]);
    const auto right = ArtifactReader::to_integer(tok[3]);
    if (feature < -1 || feature > INT32_MAX || left < -1 || left > INT32_MAX || right < -1 || right > INT32_MAX) {
      in.fail("tree node field out of range");
    }
    n.feature = static_cast<int>(feature);
    n.threshold = ArtifactReader::to_number(tok[1]);
    n.left = static_cast<int>(left);
    n.right = static_cast<int>(right);
    n.value = ArtifactReader::to_number(tok[4]);
    if (probability_leaves && n.is_leaf() && (n.value < 0.0 || n.value > 1.0)) {
      in.fail("leaf probability outside [0, 1]");
    }
  }
  t.check(n_features);
  return t;
}

std::size_t read_size(ArtifactReader& in, std::string_view key) {
  const auto v = in.unsigned_integer(key);
  if (v > (1u << 24)) in.fail("'" + std::string(key) + "' is implausibly large");
  return static_cast<std::size_t>(v);
}

int read_int(ArtifactReader& in, std::string_view key) {
  const auto v = in.integer(key);
  if (v < INT32_MIN || v > INT32_MAX) in.fail("'" + std::string(key) + "' out of range");
  return static_cast<int>(v);
}

std::vector<double> read_list(ArtifactReader& in, std::string_view key, std::size_t expected) {
  auto v = in.numbers(key);
  if (v.size() != expected) {
    in.fail("'" + std::string(key) + "' has " + std::to_string(v.size()) + " values, expected " +
            std::to_string(expected));
  }
  return v;
}

void write_params(ArtifactWriter& out, const LogisticModel& m) {
  out.put("hp.learning_rate") << m.hp.learning_rate;
  out.put("hp.max_iters") << m.hp.max_iters;
  out.put("hp.tolerance") << m.hp.tolerance;
  out.put("hp.l2") << m.hp.l2;
  put_list(out, "weights", m.weights);
  out.put("bias") << m.bias;
  out.put("final_loss") << m.final_loss;
  out.put("iterations") << m.iterations;
}

LogisticModel read_logistic(ArtifactReader& in) {
  LogisticModel m;
  m.hp.learning_rate = in.number("hp.learning_rate");
  m.hp.max_iters = read_int(in, "hp.max_iters");
  m.hp.tolerance = in.number("hp.tolerance");
  m.hp.l2 = in.number("hp.l2");
  check_hyperparams(m.hp);
  m.weights = in.numbers("weights");
  m.bias = in.number("bias");
  m.final_loss = in.number("final_loss");
  m.iterations = read_int(in, "iterations");
  return m;
}

void write_params(ArtifactWriter& out, const TreeModel& m) {
  out.put("hp.max_depth") << m.hp.max_depth;
  out.put("hp.min_samples_leaf") << m.hp.min_samples_leaf;
  out.put("n_features") << m.n_features;
  write_tree(out, m.tree);
}

TreeModel read_tree_model(ArtifactReader& in) {
  TreeModel m;
  m.hp.max_depth = read_int(in, "hp.max_depth");
  m.hp.min_samples_leaf = read_int(in, "hp.min_samples_leaf");
  check_hyperparams(m.hp);
  m.n_features = read_size(in, "n_features");
  m.tree = read_tree(in, m.n_features, true);
  return m;
}

void write_params(ArtifactWriter& out, const ForestModel& m) {
  out.put("hp.n_trees") << m.hp.n_trees;
  out.put("hp.m_try") << m.hp.m_try;
  out.put("hp.max_depth") << m.hp.max_depth;
  out.put("hp.min_samples_leaf") << m.hp.min_samples_leaf;
  out.put("hp.bootstrap") << m.hp.bootstrap;
  out.put("hp.seed") << m.hp.seed;
  out.put("n_features") << m.n_features;
  out.put("m_try") << m.m_try;
  put_list(out, "importances", m.importances);
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    out.put("tree_seed") << m.tree_seeds[t];
    write_tree(out, m.trees[t]);
  }
}

ForestModel read_forest(ArtifactReader& in) {
  ForestModel m;
  m.hp.n_trees = read_int(in, "hp.n_trees");
  m.hp.m_try = read_int(in, "hp.m_try");
  m.hp.max_depth = read_int(in, "hp.max_depth");
  m.hp.min_samples_leaf = read_int(in, "hp.min_samples_leaf");
  m.hp.bootstrap = in.boolean("hp.bootstrap");
  m.hp.seed = in.unsigned_integer("hp.seed");
  check_hyperparams(m.hp);
  m.n_features = read_size(in, "n_features");
  m.m_try = read_int(in, "m_try");
  if (m.m_try < 1 || static_cast<std::size_t>(m.m_try) > std::max<std::size_t>(m.n_features, 1)) {
    in.fail("m_try outside [1, d]");
  }
  m.importances = read_list(in, "importances", m.n_features);
  for (int t = 0; t < m.hp.n_trees; ++t) {
    m.tree_seeds.push_back(in.unsigned_integer("tree_seed"));
    m.trees.push_back(read_tree(in, m.n_features, true));
  }
  return m;
}

void write_params(ArtifactWriter& out, const GbtModel& m) {
  out.put("hp.n_trees") << m.hp.n_trees;
  out.put("hp.learning_rate") << m.hp.learning_rate;
  out.put("hp.max_depth") << m.hp.max_depth;
  out.put("hp.min_samples_leaf") << m.hp.min_samples_leaf;
  out.put("hp.raw_margin") << m.hp.raw_margin;
  out.put("n_features") << m.n_features;
  out.put("base_score") << m.base_score;
  put_list(out, "train_loss", m.train_loss);
  for (const auto& t : m.trees) write_tree(out, t);
}

GbtModel read_gbt(ArtifactReader& in) {
  GbtModel m;
  m.hp.n_trees = read_int(in, "hp.n_trees");
  m.hp.learning_rate = in.number("hp.learning_rate");
  m.hp.max_depth = read_int(in, "hp.max_depth");
  m.hp.min_samples_leaf = read_int(in, "hp.min_samples_leaf");
  m.hp.raw_margin = in.boolean("hp.raw_margin");
  check_hyperparams(m.hp);
  m.n_features = read_size(in, "n_features");
  m.base_score = in.number("base_score");
  m.train_loss = read_list(in, "train_loss", static_cast<std::size_t>(m.hp.n_trees) + 1);
  for (int t = 0; t < m.hp.n_trees; ++t) m.trees.push_back(read_tree(in, m.n_features, false));
  return m;
}

void write_params(ArtifactWriter& out, const NaiveBayesModel& m) {
  out.put("hp.alpha") << m.hp.alpha;
  out.put("hp.variance_floor") << m.hp.variance_floor;
  put_list(out, "hp.categorical_columns", m.hp.categorical_columns);
  out.put("prior") << m.prior[0] << m.prior[1];
  out.put("features") << m.features.size();
  for (const auto& f : m.features) {
    if (f.categorical) {
      auto line = out.put("categorical");
      line << f.frequencies[0].size();
      for (int c = 0; c < 2; ++c) {
        for (const double v : f.frequencies[c]) line << v;
      }
    } else {
      out.put("gaussian") << f.mean[0] << f.mean[1] << f.variance[0] << f.variance[1];
    }
  }
}

NaiveBayesModel read_naive_bayes(ArtifactReader& in) {
  NaiveBayesModel m;
  m.hp.alpha = in.number("hp.alpha");
  m.hp.variance_floor = in.number("hp.variance_floor");
  {
    const auto tok = in.next("hp.categorical_columns");
    if (tok.empty() || ArtifactReader::to_unsigned(tok[0]) != tok.size() - 1) {
      in.fail("'hp.categorical_columns' count does not match its values");
    }
    for (std::size_t i = 1; i < tok.size(); ++i) {
      m.hp.categorical_columns.push_back(static_cast<std::size_t>(ArtifactReader::to_unsigned(tok[i])));
    }
  }
  check_hyperparams(m.hp);
  const auto prior = in.next("prior", 2);
  m.prior[0] = ArtifactReader::to_number(prior[0]);
  m.prior[1] = ArtifactReader::to_number(prior[1]);
  if (!(m.prior[0] > 0.0) || !(m.prior[1] > 0.0)) in.fail("class priors must be positive");
  const auto d = read_size(in, "features");
  m.features.resize(d);
  for (auto& f : m.features) {
    if (in.peek_key() == "categorical") {
      f.categorical = true;
      const auto tok = in.next("categorical");
      if (tok.empty()) in.fail("categorical feature without a level count");
      const auto levels = ArtifactReader::to_unsigned(tok[0]);
      if (levels < 1 || tok.size() != 1 + 2 * levels) in.fail("categorical table size mismatch");
      for (int c = 0; c < 2; ++c) {
        for (std::size_t k = 0; k < levels; ++k) {
          const double v = ArtifactReader::to_number(tok[1 + c * levels + k]);
          if (!(v > 0.0)) in.fail("categorical frequency must be positive");
          f.frequencies[c].push_back(v);
        }
      }
    } else {
      const auto tok = in.next("gaussian", 4);
      for (int c = 0; c < 2; ++c) {
        f.mean[c] = ArtifactReader::to_number(tok[c]);
        f.variance[c] = ArtifactReader::to_number(tok[2 + c]);
        if (!(f.variance[c] > 0.0)) in.fail("Gaussian variance must be positive");
      }
    }
  }
  return m;
}

void write_params(ArtifactWriter& out, const MlpModel& m) {
  out.put("hp.hidden") << m.hp.hidden;
  out.put("hp.learning_rate") << m.hp.learning_rate;
  out.put("hp.epochs") << m.hp.epochs;
  out.put("hp.batch_size") << m.hp.batch_size;
  out.put("hp.seed") << m.hp.seed;
  out.put("hp.l2") << m.hp.l2;
  out.put("inputs") << m.inputs;
  out.put("hidden") << m.hidden;
  put_list(out, "w1", m.w1);
  put_list(out, "b1", m.b1);
  put_list(out, "w2", m.w2);
  out.put("b2") << m.b2;
}

MlpModel read_mlp(ArtifactReader& in) {
  MlpModel m;
  m.hp.hidden = read_int(in, "hp.hidden");
  m.hp.learning_rate = in.number("hp.learning_rate");
  m.hp.epochs = read_int(in, "hp.epochs");
  m.hp.batch_size = read_int(in, "hp.batch_size");
  m.hp.seed = in.unsigned_integer("hp.seed");
  m.hp.l2 = in.number("hp.l2");
  check_hyperparams(m.hp);
  m.inputs = read_size(in, "inputs");
  m.hidden = read_size(in, "hidden");
  if (m.hidden < 1) in.fail("hidden layer must have at least one unit");
  m.w1 = read_list(in, "w1", m.inputs * m.hidden);
  m.b1 = read_list(in, "b1", m.hidden);
  m.w2 = read_list(in, "w2", m.hidden);
  m.b2 = in.number("b2");
  return m;
}

}  // namespace

void write_model(ArtifactWriter& out, const ScoreModel& model) {
  out.put("kind") << to_string(model.kind());
  std::visit([&](const auto& m) { write_params(out, m); }, model.params());
}

ScoreModel read_model(ArtifactReader& in) {
  const auto kind_text = in.text("kind");
  ModelKind kind{};
  try {
    kind = parse_model_kind(kind_text);
  } catch (const ConfigError&) {
    in.fail("unknown model kind '" + kind_text + "'");
  }
  try {
    switch (kind) {
      case ModelKind::lr: return ScoreModel(read_logistic(in));
      case ModelKind::dt: return ScoreModel(read_tree_model(in));
      case ModelKind::rf: return ScoreModel(read_forest(in));
      case ModelKind::gbt: return ScoreModel(read_gbt(in));
      case ModelKind::nb: return ScoreModel(read_naive_bayes(in));
      case ModelKind::nn: return ScoreModel(read_mlp(in));
    }
  } catch (const ConfigError& e) {
    in.fail(e.what());
  }
  in.fail("unreachable model kind");
}

std::string save_model(const ScoreModel& model) {
  ArtifactWriter out("model");
  write_model(out, model);
  return std::move(out).finish();
}

ScoreModel load_model(std::string_view bytes) {
  ArtifactReader in(bytes);
  if (in.type() != "model") in.fail("expected a model artifact, found '" + in.type() + "'");
  auto model = read_model(in);
  if (!in.done()) in.fail("unexpected trailing content");
  return model;
}

}  // namespace clinpred
