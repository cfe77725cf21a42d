#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clinpred/dataset.hpp"
#include "clinpred/evaluation.hpp"
#include "clinpred/ingest.hpp"
#include "clinpred/models.hpp"
#include "clinpred/preprocess.hpp"
#include "clinpred/reporting.hpp"

namespace clinpred {

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct DataSource {
  std::optional<std::filesystem::path> file;  // CSV; synthesized when absent
  std::optional<std::filesystem::path> schema_file;
  SynthSpec synth;
  bool synth_seed_set = false;  // otherwise derived from the master seed
};

struct PreprocessConfig {
  ImputeRule numeric = ImputeRule::none;      // default for numeric features
  ImputeRule categorical = ImputeRule::none;  // default for categorical features
  ImputePolicy overrides;                     // per column, wins over the defaults
  bool dedupe = false;
  bool drop_null_columns = false;
  std::optional<std::vector<std::string>> encode;  // empty optional: every categorical feature
  std::set<std::string> positive_labels;           // categorical targets only
  std::vector<PlausibilityRule> plausibility;
  std::vector<std::string> features;  // empty: every feature column
  std::vector<std::string> drop;
  bool fit_on_train_only = false;
};

struct ModelConfig {
  std::string name;
  Hyperparams hp;
  bool seed_set = false;
  std::optional<std::vector<std::string>> nb_categorical;  // feature names; empty optional: every *_index

  /// Report label: the display name when the model is named after its kind.
  std::string label() const;
};

struct PipelineConfig {
  std::string experiment;
  DiseaseId disease = DiseaseId::heart;
  DataSource data;
  PreprocessConfig preprocess;
  std::vector<ModelConfig> models;
  SplitSpec split;
  bool split_seed_set = false;
  ThresholdCriterion threshold;
  Averaging averaging = Averaging::binary;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::filesystem::path out;
  bool repro = false;

  /// Throws ConfigError naming the offending field.
  void check() const;
};

/// The built-in pipeline for a disease, with all six models and synthetic data.
PipelineConfig preset_config(DiseaseId id);

/// Flat key = value lines; '#' starts a comment. A `preset` key (or else a
/// `disease` key) selects the base configuration the other keys override.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Production bundle
// ---------------------------------------------------------------------------

/// Everything needed to score raw rows: input schema, cleaning steps, fitted
/// imputer and encoder, model and threshold.
struct PipelineBundle {
  std::string experiment;
  std::string model_name;
  DiseaseId disease = DiseaseId::heart;
  Schema schema;
  std::vector<std::string> dropped_columns;
  FittedImputer imputer;
  FittedImputer fallback;  // covers feature cells the configured policy left missing
  EncoderMap encoder;
  std::vector<std::string> feature_names;
  ThresholdChoice threshold;
  ScoreModel model;

  bool operator==(const PipelineBundle&) const = default;
};

std::string save_bundle(const PipelineBundle& bundle);
PipelineBundle load_bundle(std::string_view bytes);

struct Prediction {
  std::vector<double> scores;
  std::vector<int> predicted;
  EncodeStats encode;
};

/// Reads production rows against the bundle schema. Target, identifier and
/// excluded columns may be absent; a missing feature column is a SchemaError.
Table read_prediction_input(const PipelineBundle& bundle, std::istream& in,
                            std::vector<std::string>* warnings = nullptr);
Prediction predict_table(const PipelineBundle& bundle, const Table& raw, Execution exec = {});
/// "row,score,predicted" with 0-based row numbers.
std::string prediction_csv(const Prediction& p);

// ---------------------------------------------------------------------------
// Experiment runs
// ---------------------------------------------------------------------------

struct ModelRun {
  ModelConfig config;  // hyperparameters after seed resolution
  Evaluation evaluation;
  PipelineBundle bundle;
};

struct RunResult {
  PipelineConfig config;
  ComparisonReport report;
  ValidationReport validation;
  std::vector<std::string> notes;  // deterministic pipeline notes
  LabeledMatrix train;
  LabeledMatrix test;
  std::vector<ModelRun> models;
};

RunResult run_experiment(const PipelineConfig& config);

/// Machine-readable report plus ROC curves, read back by the `report` command.
std::string results_json(const RunResult& run);

struct StoredResults {
  ComparisonReport report;
  std::vector<NamedCurve> curves;
};

StoredResults parse_results_json(std::string_view text);

/// Writes report.txt, report.csv, results.json, roc.svg, validation.txt,
/// notes.txt and models/<name>/{bundle.clinpred,roc.csv,confusion.txt}.
/// Every file is a pure function of the run.
void write_outputs(const RunResult& run, const std::filesystem::path& dir);

/// Side-by-side comparison against the published metrics for the disease.
std::string repro_report(DiseaseId disease, const ComparisonReport& report);

// ---------------------------------------------------------------------------
// Published confusion-matrix fixtures
// ---------------------------------------------------------------------------

struct GoldenExpectation {
  std::string metric;  // precision | recall | accuracy | f1
  double value = 0.0;
  double tolerance = 0.0;
};

struct GoldenCase {
  std::string id;
  std::string source;
  ConfusionCounts counts;
  Averaging averaging = Averaging::binary;
  bool gating = true;  // informational cases never fail the suite
  std::vector<GoldenExpectation> expected;
};

struct GoldenCheck {
  GoldenExpectation expected;
  std::optional<double> actual;
  bool pass = false;
};

struct GoldenOutcome {
  GoldenCase fixture;
  std::vector<GoldenCheck> checks;
  bool pass = false;
};

std::vector<GoldenCase> golden_cases();
/// `perturb` shifts every gating fixture's counts so the suite must fail.
std::vector<GoldenOutcome> run_goldens(bool perturb = false);
bool goldens_pass(const std::vector<GoldenOutcome>& outcomes) noexcept;
std::string format_goldens(const std::vector<GoldenOutcome>& outcomes);

}  // namespace clinpred
