#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clinpred/dataset.hpp"
#include "clinpred/parallel.hpp"

namespace clinpred {

class ArtifactWriter;
class ArtifactReader;

enum class ModelKind { lr, dt, rf, gbt, nb, nn };
enum class ScoreSemantics { probability, margin };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);
/// Display name used in reports ("LR", "DT", "RF", "GBT", "NB", "NN").
std::string_view display_name(ModelKind kind) noexcept;

double sigmoid(double z) noexcept;
/// Mean binary log-loss of probabilities, clamped away from 0 and 1.
double mean_log_loss(std::span<const double> probabilities, std::span<const int> labels);

// ---------------------------------------------------------------------------
// Hyperparameters
// ---------------------------------------------------------------------------

struct LrHyper {
  double learning_rate = 0.1;
  int max_iters = 2000;
  double tolerance = 1e-8;
  double l2 = 0.0;

  bool operator==(const LrHyper&) const = default;
};

struct TreeHyper {
  int max_depth = 8;
  int min_samples_leaf = 20;

  bool operator==(const TreeHyper&) const = default;
};

struct ForestHyper {
  int n_trees = 100;
  int m_try = 0;  // 0: ceil(sqrt(d))
  int max_depth = 12;
  int min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  bool operator==(const ForestHyper&) const = default;
};

struct GbtHyper {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 1;
  bool raw_margin = false;  // predict_scores emits margins instead of probabilities

  bool operator==(const GbtHyper&) const = default;
};

struct NbHyper {
  double alpha = 1.0;
  double variance_floor = 1e-9;
  std::vector<std::size_t> categorical_columns;  // matrix columns holding category indices

  bool operator==(const NbHyper&) const = default;
};

struct MlpHyper {
  int hidden = 32;
  double learning_rate = 0.01;
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 0.0;

  bool operator==(const MlpHyper&) const = default;
};

using Hyperparams = std::variant<LrHyper, TreeHyper, ForestHyper, GbtHyper, NbHyper, MlpHyper>;

Hyperparams default_hyperparams(ModelKind kind);
ModelKind kind_of(const Hyperparams& hp) noexcept;
/// Throws ConfigError for out-of-domain values.
void check_hyperparams(const Hyperparams& hp);

// ---------------------------------------------------------------------------
// Fitted parameters
// ---------------------------------------------------------------------------

/// Flat binary tree; nodes are stored in preorder and children always follow
/// their parent. A leaf has feature < 0. Rows with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const noexcept;
  int depth() const noexcept;
  /// Throws ArtifactFormatError if the node links are not a valid preorder tree.
  void check(std::size_t n_features) const;
  bool operator==(const Tree&) const = default;
};

struct LogisticModel {
  LrHyper hp;
  std::vector<double> weights;
  double bias = 0.0;
  double final_loss = 0.0;
  int iterations = 0;

  bool operator==(const LogisticModel&) const = default;
};

struct TreeModel {
  TreeHyper hp;
  std::size_t n_features = 0;
  Tree tree;

  bool operator==(const TreeModel&) const = default;
};

struct ForestModel {
  ForestHyper hp;
  std::size_t n_features = 0;
  int m_try = 1;
  std::vector<std::uint64_t> tree_seeds;
  std::vector<Tree> trees;
  std::vector<double> importances;  // normalized total Gini decrease per feature

  bool operator==(const ForestModel&) const = default;
};

struct GbtModel {
  GbtHyper hp;
  std::size_t n_features = 0;
  double base_score = 0.0;
  std::vector<Tree> trees;
  std::vector<double> train_loss;  // mean log-loss after 0, 1, ..., n_trees rounds

  double margin(std::span<const double> x) const noexcept;
  bool operator==(const GbtModel&) const = default;
};

struct NbFeature {
  bool categorical = false;
  double mean[2] = {0.0, 0.0};
  double variance[2] = {1.0, 1.0};
  std::vector<double> frequencies[2];  // categorical: smoothed P(level | class)

  bool operator==(const NbFeature&) const = default;
};

struct NaiveBayesModel {
  NbHyper hp;
  double prior[2] = {0.5, 0.5};
  std::vector<NbFeature> features;

  /// (P(y=0 | x), P(y=1 | x)).
  std::pair<double, double> posteriors(std::span<const double> x) const noexcept;
  bool operator==(const NaiveBayesModel&) const = default;
};

/// d inputs -> h rectifier units -> one sigmoid output.
struct MlpModel {
  MlpHyper hp;
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // inputs x hidden, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;

  double forward(std::span<const double> x) const noexcept;  // pre-sigmoid
  bool operator==(const MlpModel&) const = default;
};

/// A fitted classifier emitting one real score per row.
class ScoreModel {
 public:
  using Params = std::variant<LogisticModel, TreeModel, ForestModel, GbtModel, NaiveBayesModel, MlpModel>;

  ScoreModel() = default;
  explicit ScoreModel(Params params) : params_(std::move(params)) {}

  ModelKind kind() const noexcept;
  ScoreSemantics semantics() const noexcept;
  std::size_t input_dim() const noexcept;
  const Params& params() const noexcept { return params_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(params_);
  }

  bool operator==(const ScoreModel&) const = default;

 private:
  Params params_;
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

ScoreModel train_logistic(const LabeledMatrix& train, const LrHyper& hp);
ScoreModel train_tree(const LabeledMatrix& train, const TreeHyper& hp);
ScoreModel train_forest(const LabeledMatrix& train, const ForestHyper& hp, Execution exec = {});
ScoreModel train_gbt(const LabeledMatrix& train, const GbtHyper& hp);
ScoreModel train_naive_bayes(const LabeledMatrix& train, const NbHyper& hp);
ScoreModel train_mlp(const LabeledMatrix& train, const MlpHyper& hp);

ScoreModel train_model(const LabeledMatrix& train, const Hyperparams& hp, Execution exec = {});

/// Scores per row, following the model's semantics. Pure and reentrant.
std::vector<double> predict_scores(const ScoreModel& model, const Matrix& x, Execution exec = {});
/// Probability scores regardless of semantics (gbt margins pass through sigmoid).
std::vector<double> predict_probabilities(const ScoreModel& model, const Matrix& x, Execution exec = {});

// ---------------------------------------------------------------------------
// Loss/gradient routines exposed for verification
// ---------------------------------------------------------------------------

struct LogisticGradient {
  double loss = 0.0;
  std::vector<double> weights;
  double bias = 0.0;
};

/// Mean log-loss (+ l2/2 * |w|^2) and its analytic gradient.
LogisticGradient logistic_loss_gradient(const Matrix& x, std::span<const int> y,
                                        std::span<const double> weights, double bias, double l2 = 0.0);

struct MlpGradient {
  double loss = 0.0;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

MlpGradient mlp_loss_gradient(const MlpModel& model, const Matrix& x, std::span<const int> y);

/// Gini impurity of a node with the given positive fraction.
double gini(double positive_fraction) noexcept;

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Best Gini split of the full matrix (the root split train_tree makes).
SplitChoice best_gini_split(const LabeledMatrix& data, int min_samples_leaf = 1);

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

/// Versioned, checksummed text artifact; doubles are written in shortest
/// round-trip form so reloaded models score bit-identically.
std::string save_model(const ScoreModel& model);
/// Throws TruncatedArtifactError, ChecksumError, VersionError or
/// ArtifactFormatError.
ScoreModel load_model(std::string_view bytes);

void write_model(ArtifactWriter& out, const ScoreModel& model);
ScoreModel read_model(ArtifactReader& in);

}  // namespace clinpred
