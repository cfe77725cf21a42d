#include "clinpred/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "clinpred/artifact.hpp"
#include "clinpred/errors.hpp"
#include "clinpred/rng.hpp"
#include "json.hpp"

namespace clinpred {

// ---------------------------------------------------------------------------
// Bundle persistence
// ---------------------------------------------------------------------------

namespace {

void write_fills(ArtifactWriter& out, std::string_view key, const FittedImputer& imp) {
  out.put(key) << imp.fills.size();
  for (const auto& f : imp.fills) {
    auto line = out.put("fill");
    line << f.column << to_string(f.rule);
    if (const auto* d = std::get_if<double>(&f.value)) {
      line << "number" << *d;
    } else if (const auto* s = std::get_if<std::string>(&f.value)) {
      line << "token" << *s;
    } else {
      line << "missing" << "";
    }
  }
}

FittedImputer read_fills(ArtifactReader& in, std::string_view key) {
  const auto n = in.unsigned_integer(key);
  if (n > 100000) in.fail("implausible fill count");
  FittedImputer imp;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto tok = in.next("fill", 4);
    ImputeFill f;
    f.column = decode_token(tok[0]);
    try {
      f.rule = parse_impute_rule(decode_token(tok[1]));
    } catch (const ConfigError& e) {
      in.fail(e.what());
    }
    if (tok[2] == "number") {
      f.value = ArtifactReader::to_number(tok[3]);
    } else if (tok[2] == "token") {
      f.value = decode_token(tok[3]);
    } else if (tok[2] == "missing") {
      f.value = Missing{};
    } else {
      in.fail("unknown fill value kind");
    }
    imp.fills.push_back(std::move(f));
  }
  return imp;
}

}  // namespace

std::string save_bundle(const PipelineBundle& b) {
  ArtifactWriter out("pipeline");
  out.put("experiment") << b.experiment;
  out.put("model_name") << b.model_name;
  out.put("disease") << to_string(b.disease);
  out.put("schema") << b.schema.size();
  for (const auto& c : b.schema) out.put("column") << c.name << to_string(c.kind) << to_string(c.role) << c.description;
  {
    auto line = out.put("dropped_columns");
    line << b.dropped_columns.size();
    for (const auto& c : b.dropped_columns) line << c;
  }
  write_fills(out, "imputer", b.imputer);
  write_fills(out, "fallback", b.fallback);
  out.put("encoder") << b.encoder.columns.size();
  for (const auto& c : b.encoder.columns) {
    auto line = out.put("encode");
    line << c.column << c.tokens.size();
    for (const auto& t : c.tokens) line << t;
  }
  {
    auto line = out.put("features");
    line << b.feature_names.size();
    for (const auto& f : b.feature_names) line << f;
  }
  out.put("threshold") << b.threshold.threshold << to_string(b.threshold.criterion);
  if (b.threshold.achieved) {
    out.put("achieved") << *b.threshold.achieved;
  } else {
    out.put("achieved") << "none";
  }
  write_model(out, b.model);
  return std::move(out).finish();
}

namespace {

std::vector<std::string> read_names(ArtifactReader& in, std::string_view key) {
  const auto tok = in.next(key);
  if (tok.empty() || ArtifactReader::to_unsigned(tok[0]) != tok.size() - 1) {
    in.fail("'" + std::string(key) + "' count does not match its values");
  }
  std::vector<std::string> out;
  for (std::size_t i = 1; i < tok.size(); ++i) out.push_back(decode_token(tok[i]));
  return out;
}

}  // namespace

PipelineBundle load_bundle(std::string_view bytes) {
  ArtifactReader in(bytes);
  if (in.type() != "pipeline") in.fail("expected a pipeline artifact, found '" + in.type() + "'");
  PipelineBundle b;
  b.experiment = in.text("experiment");
  b.model_name = in.text("model_name");
  try {
    b.disease = parse_disease(in.text("disease"));
    const auto n = in.unsigned_integer("schema");
    if (n > 100000) in.fail("implausible schema size");
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto tok = in.next("column", 4);
      b.schema.push_back({decode_token(tok[0]), parse_column_kind(decode_token(tok[1])),
                          parse_column_role(decode_token(tok[2])), decode_token(tok[3])});
    }
    validate_schema(b.schema);
  } catch (const ValidationError& e) {
    in.fail(e.what());
  }
  b.dropped_columns = read_names(in, "dropped_columns");
  b.imputer = read_fills(in, "imputer");
  b.fallback = read_fills(in, "fallback");
  const auto enc = in.unsigned_integer("encoder");
  if (enc > 100000) in.fail("implausible encoder size");
  for (std::uint64_t i = 0; i < enc; ++i) {
    const auto tok = in.next("encode");
    if (tok.size() < 2 || ArtifactReader::to_unsigned(tok[1]) != tok.size() - 2) {
      in.fail("encoder token count mismatch");
    }
    CategoryIndex ci;
    ci.column = decode_token(tok[0]);
    for (std::size_t k = 2; k < tok.size(); ++k) ci.tokens.push_back(decode_token(tok[k]));
    b.encoder.columns.push_back(std::move(ci));
  }
  b.feature_names = read_names(in, "features");
  const auto th = in.next("threshold", 2);
  b.threshold.threshold = ArtifactReader::to_number(th[0]);
  try {
    b.threshold.criterion = parse_threshold_criterion(decode_token(th[1]));
  } catch (const ConfigError& e) {
    in.fail(e.what());
  }
  const auto ach = in.next("achieved", 1);
  if (ach[0] != "none") b.threshold.achieved = ArtifactReader::to_number(ach[0]);
  b.model = read_model(in);
  if (!in.done()) in.fail("unexpected trailing content");
  if (b.model.input_dim() != b.feature_names.size()) {
    throw ArtifactFormatError("bundle model expects " + std::to_string(b.model.input_dim()) + " features but lists " +
                              std::to_string(b.feature_names.size()));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Production scoring
// ---------------------------------------------------------------------------

Table read_prediction_input(const PipelineBundle& bundle, std::istream& in, std::vector<std::string>* warnings) {
  CsvOptions opt;
  opt.warnings = warnings;
  for (const auto& c : bundle.schema) {
    const bool dropped = std::find(bundle.dropped_columns.begin(), bundle.dropped_columns.end(), c.name) !=
                         bundle.dropped_columns.end();
    if (c.role != ColumnRole::feature || dropped) opt.optional_columns.push_back(c.name);
  }
  return parse_csv(in, bundle.schema, opt);
}

Prediction predict_table(const PipelineBundle& bundle, const Table& raw, Execution exec) {
  Table t = raw;
  std::vector<std::string> drop;
  for (const auto& c : bundle.dropped_columns) {
    if (t.find_column(c)) drop.push_back(c);
  }
  t = drop_columns(t, drop);
  t = apply_imputer(t, bundle.imputer);
  t = apply_imputer(t, bundle.fallback);
  Prediction p;
  t = apply_encoder(t, bundle.encoder, &p.encode);
  const Matrix x = assemble_features(t, bundle.feature_names);
  p.scores = predict_probabilities(bundle.model, x, exec);
  p.predicted.reserve(p.scores.size());
  for (const double s : p.scores) p.predicted.push_back(s >= bundle.threshold.threshold ? 1 : 0);
  return p;
}

std::string prediction_csv(const Prediction& p) {
  std::string out = "row,score,predicted\n";
  for (std::size_t i = 0; i < p.scores.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(p.scores[i]) + ',' + std::to_string(p.predicted[i]) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment
// ---------------------------------------------------------------------------

namespace {

Table load_table(const PipelineConfig& cfg, const Schema& schema, std::vector<std::string>& notes,
                 std::string& provenance) {
  if (cfg.data.file) {
    std::ifstream in(*cfg.data.file, std::ios::binary);
    if (!in) throw IoError("cannot open data file '" + cfg.data.file->string() + "'");
    std::vector<std::string> warnings;
    CsvOptions opt;
    opt.warnings = &warnings;
    Table t = parse_csv(in, schema, opt);
    for (auto& w : warnings) notes.push_back("ingest: " + w);
    provenance = "data: file " + cfg.data.file->filename().string();
    return t;
  }
  SynthSpec spec = cfg.data.synth;
  if (!cfg.data.synth_seed_set) spec.seed = derive_seed(cfg.seed, "data.synth");
  provenance = "data: synthetic " + std::string(to_string(cfg.disease)) + " rows=" + std::to_string(spec.n_rows) +
               " signal=" + format_double(spec.signal_strength) + " positive_rate=" +
               format_double(spec.positive_rate) + " missing_rate=" + format_double(spec.missing_rate) +
               " seed=" + std::to_string(spec.seed);
  return synthesize(cfg.disease, spec);
}

bool is_feature(const Table& t, const std::string& name) {
  const auto c = t.find_column(name);
  return c && t.schema()[*c].role == ColumnRole::feature;
}

ImputePolicy resolve_policy(const Table& t, const PreprocessConfig& p) {
  ImputePolicy policy;
  for (const auto& col : t.schema()) {
    if (col.role != ColumnRole::feature) continue;
    policy.set(col.name, col.kind == ColumnKind::numeric ? p.numeric : p.categorical);
  }
  for (const auto& [column, rule] : p.overrides.rules) {
    const auto c = t.find_column(column);
    const std::string field = "preprocess.impute." + column;
    if (!c) throw ConfigError(field + ": unknown column '" + column + "'");
    const auto kind = t.schema()[*c].kind;
    if (rule == ImputeRule::mode && kind != ColumnKind::categorical) {
      throw ConfigError(field + ": mode imputation needs a categorical column, but '" + column + "' is numeric");
    }
    if ((rule == ImputeRule::zero || rule == ImputeRule::mean) && kind != ColumnKind::numeric) {
      throw ConfigError(field + ": " + std::string(to_string(rule)) + " imputation needs a numeric column, but '" +
                        column + "' is categorical");
    }
    policy.set(column, rule);
  }
  return policy;
}

FittedImputer fit_fallback(const Table& t, std::span<const std::size_t> rows) {
  FittedImputer out;
  for (const auto& col : t.schema()) {
    if (col.role != ColumnRole::feature) continue;
    ImputePolicy one;
    one.set(col.name, col.kind == ColumnKind::numeric ? ImputeRule::mean : ImputeRule::mode);
    try {
      auto f = fit_imputer(t, one, rows);
      out.fills.insert(out.fills.end(), f.fills.begin(), f.fills.end());
    } catch (const UnfittableColumnError&) {
    }
  }
  return out;
}

Hyperparams resolve_hyper(const ModelConfig& m, const PipelineConfig& cfg, const LabeledMatrix& data) {
  Hyperparams hp = m.hp;
  const auto seed = derive_seed(cfg.seed, "model." + m.name);
  if (auto* h = std::get_if<ForestHyper>(&hp); h && !m.seed_set) h->seed = seed;
  if (auto* h = std::get_if<MlpHyper>(&hp); h && !m.seed_set) h->seed = seed;
  if (auto* h = std::get_if<NbHyper>(&hp)) {
    h->categorical_columns.clear();
    for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
      const auto& name = data.feature_names[j];
      const bool pick = m.nb_categorical
                            ? std::find(m.nb_categorical->begin(), m.nb_categorical->end(), name) !=
                                  m.nb_categorical->end()
                            : name.ends_with(kIndexSuffix);
      if (pick) h->categorical_columns.push_back(j);
    }
    if (m.nb_categorical) {
      for (const auto& name : *m.nb_categorical) {
        if (std::find(data.feature_names.begin(), data.feature_names.end(), name) == data.feature_names.end()) {
          throw ConfigError("model." + m.name + ".categorical_columns: '" + name + "' is not an assembled feature");
        }
      }
    }
  }
  return hp;
}

}  // namespace

RunResult run_experiment(const PipelineConfig& cfg) {
  cfg.check();
  RunResult run;
  run.config = cfg;
  auto& notes = run.notes;

  const Schema schema = [&] {
    if (!cfg.data.schema_file) return builtin_schema(cfg.disease);
    std::ifstream in(*cfg.data.schema_file, std::ios::binary);
    if (!in) throw IoError("cannot open schema file '" + cfg.data.schema_file->string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_schema(ss.str());
  }();

  std::string provenance;
  Table table = load_table(cfg, schema, notes, provenance);
  notes.push_back("rows loaded: " + std::to_string(table.row_count()));

  std::vector<std::string> dropped = cfg.preprocess.drop;
  for (const auto& c : dropped) {
    if (!table.find_column(c)) throw ConfigError("preprocess.drop: unknown column '" + c + "'");
    if (table.schema()[table.column_index(c)].role == ColumnRole::target) {
      throw ConfigError("preprocess.drop: '" + c + "' is the target column");
    }
  }
  table = drop_columns(table, dropped);

  auto [with_target, missing_target] = drop_missing_target(table);
  table = std::move(with_target);
  if (missing_target > 0) notes.push_back("rows dropped for a missing target: " + std::to_string(missing_target));

  const auto& target_spec = table.schema()[table.target_index()];
  if (target_spec.kind == ColumnKind::categorical) {
    if (cfg.preprocess.positive_labels.empty()) {
      throw ConfigError("preprocess.positive_labels: required because target '" + target_spec.name +
                        "' is categorical");
    }
    table = binarize_target(table, cfg.preprocess.positive_labels);
  }

  if (cfg.preprocess.dedupe) {
    const auto before = table.row_count();
    table = dedupe(table);
    notes.push_back("duplicate rows removed: " + std::to_string(before - table.row_count()));
  }
  if (cfg.preprocess.drop_null_columns) {
    auto dropped_nulls = drop_null_columns(table);
    table = std::move(dropped_nulls.table);
    for (const auto& c : dropped_nulls.dropped_columns) {
      dropped.push_back(c);
      notes.push_back("column dropped for null cells: " + c);
    }
  }

  const auto labels = target_labels(table);
  SplitSpec split = cfg.split;
  if (!cfg.split_seed_set) split.seed = derive_seed(cfg.seed, "split");
  const auto parts = split_indices(labels, split);
  std::vector<std::size_t> all(table.row_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::span<const std::size_t> fit_rows = cfg.preprocess.fit_on_train_only ? parts.train : all;

  const auto policy = resolve_policy(table, cfg.preprocess);
  const auto imputer = fit_imputer(table, policy, fit_rows);
  table = apply_imputer(table, imputer);
  run.validation = validate(table, cfg.preprocess.plausibility);
  const auto fallback = fit_fallback(table, fit_rows);

  std::vector<std::string> encode_cols;
  if (cfg.preprocess.encode) {
    for (const auto& c : *cfg.preprocess.encode) {
      if (!table.find_column(c)) throw ConfigError("preprocess.encode: unknown column '" + c + "'");
      encode_cols.push_back(c);
    }
  } else {
    for (const auto& col : table.schema()) {
      if (col.role == ColumnRole::feature && col.kind == ColumnKind::categorical) encode_cols.push_back(col.name);
    }
  }
  const auto encoder = fit_encoder(table, encode_cols, fit_rows);
  const Table encoded = apply_encoder(table, encoder);

  std::vector<std::string> only;
  for (const auto& f : cfg.preprocess.features) {
    if (!is_feature(encoded, f) && !is_feature(encoded, f + std::string(kIndexSuffix))) {
      throw ConfigError("preprocess.features: '" + f + "' is not a feature column");
    }
    only.push_back(f);
  }
  const LabeledMatrix data = assemble(encoded, only);
  run.train = data.select_rows(parts.train);
  run.test = data.select_rows(parts.test);
  notes.push_back("features: " + std::to_string(data.cols()) + ", train rows: " + std::to_string(run.train.rows()) +
                  ", test rows: " + std::to_string(run.test.rows()));

  run.report.experiment = cfg.experiment;
  run.report.provenance.push_back(provenance);
  run.report.provenance.push_back("split: train_fraction=" + format_double(split.train_fraction) +
                                  " stratified=" + (split.stratified ? "true" : "false") +
                                  " seed=" + std::to_string(split.seed));
  run.report.provenance.push_back("seed: " + std::to_string(cfg.seed));
  run.report.provenance.push_back("threshold: " + to_string(cfg.threshold) + ", averaging: " +
                                  std::string(to_string(cfg.averaging)));

  const Execution exec{cfg.workers};
  for (const auto& mc : cfg.models) {
    ModelRun mr;
    mr.config = mc;
    mr.config.hp = resolve_hyper(mc, cfg, data);
    const ScoreModel model = train_model(run.train, mr.config.hp, exec);
    mr.evaluation = evaluate(model, run.test, cfg.threshold, cfg.averaging, exec);
    run.report.rows.push_back({mc.label(), mr.evaluation.metrics, mr.evaluation.threshold, mr.evaluation.counts});

    auto& b = mr.bundle;
    b.experiment = cfg.experiment;
    b.model_name = mc.name;
    b.disease = cfg.disease;
    b.schema = schema;
    b.dropped_columns = dropped;
    b.imputer = imputer;
    b.fallback = fallback;
    b.encoder = encoder;
    b.feature_names = data.feature_names;
    b.threshold = mr.evaluation.threshold;
    b.model = model;
    run.models.push_back(std::move(mr));
  }
  return run;
}

// ---------------------------------------------------------------------------
// Stored results
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_of(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// JSON has no infinities; the leading ROC threshold is stored as a string.
json threshold_json(double t) { return std::isinf(t) ? json(t > 0 ? "inf" : "-inf") : json(t); }

double threshold_of(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ValidationError("results: bad threshold '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string results_json(const RunResult& run) {
  json j;
  j["experiment"] = run.report.experiment;
  j["provenance"] = run.report.provenance;
  json models = json::array();
  for (std::size_t i = 0; i < run.report.rows.size(); ++i) {
    const auto& row = run.report.rows[i];
    json m;
    m["model"] = row.model;
    m["metrics"] = {{"auc", opt(row.metrics.auc)},
                    {"precision", opt(row.metrics.precision)},
                    {"recall", opt(row.metrics.recall)},
                    {"accuracy", opt(row.metrics.accuracy)},
                    {"f1", opt(row.metrics.f1)}};
    m["threshold"] = {{"value", threshold_json(row.threshold.threshold)},
                      {"criterion", to_string(row.threshold.criterion)},
                      {"achieved", opt(row.threshold.achieved)}};
    m["counts"] = {{"tp", row.counts.tp}, {"fp", row.counts.fp}, {"fn", row.counts.fn}, {"tn", row.counts.tn}};
    json roc = json::array();
    if (i < run.models.size()) {
      for (const auto& p : run.models[i].evaluation.roc.points) roc.push_back({threshold_json(p.threshold), p.fpr, p.tpr});
    }
    m["roc"] = std::move(roc);
    models.push_back(std::move(m));
  }
  j["models"] = std::move(models);
  return j.dump(2) + "\n";
}

StoredResults parse_results_json(std::string_view text) {
  StoredResults out;
  try {
    const json j = json::parse(text);
    out.report.experiment = j.at("experiment").get<std::string>();
    out.report.provenance = j.at("provenance").get<std::vector<std::string>>();
    for (const auto& m : j.at("models")) {
      ReportRow row;
      row.model = m.at("model").get<std::string>();
      const auto& mt = m.at("metrics");
      row.metrics.auc = opt_of(mt.at("auc"));
      row.metrics.precision = opt_of(mt.at("precision"));
      row.metrics.recall = opt_of(mt.at("recall"));
      row.metrics.accuracy = opt_of(mt.at("accuracy"));
      row.metrics.f1 = opt_of(mt.at("f1"));
      const auto& th = m.at("threshold");
      row.threshold.threshold = threshold_of(th.at("value"));
      row.threshold.criterion = parse_threshold_criterion(th.at("criterion").get<std::string>());
      row.threshold.achieved = opt_of(th.at("achieved"));
      const auto& c = m.at("counts");
      row.counts = {c.at("tp").get<std::uint64_t>(), c.at("fp").get<std::uint64_t>(),
                    c.at("fn").get<std::uint64_t>(), c.at("tn").get<std::uint64_t>()};
      NamedCurve curve{row.model, {}};
      for (const auto& p : m.at("roc")) {
        curve.curve.points.push_back({threshold_of(p.at(0)), p.at(1).get<double>(), p.at(2).get<double>()});
      }
      out.report.rows.push_back(std::move(row));
      if (!curve.curve.points.empty()) out.curves.push_back(std::move(curve));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("results: ") + e.what());
  }
  out.report.check();
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_outputs(const RunResult& run, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "models", ec);
  if (ec) throw IoError("cannot create '" + (dir / "models").string() + "': " + ec.message());
  write_file(dir / "report.txt", render_comparison(run.report, ReportFormat::text));
  write_file(dir / "report.csv", render_comparison(run.report, ReportFormat::csv));
  write_file(dir / "results.json", results_json(run));
  write_file(dir / "validation.txt", run.validation.format());
  std::string notes;
  for (const auto& n : run.notes) notes += n + "\n";
  write_file(dir / "notes.txt", notes);

  std::vector<NamedCurve> curves;
  for (std::size_t i = 0; i < run.models.size(); ++i) {
    const auto& m = run.models[i];
    const auto sub = dir / "models" / m.config.name;
    std::filesystem::create_directories(sub, ec);
    if (ec) throw IoError("cannot create '" + sub.string() + "': " + ec.message());
    write_file(sub / "bundle.clinpred", save_bundle(m.bundle));
    write_file(sub / "roc.csv", roc_csv(m.evaluation.roc));
    write_file(sub / "confusion.txt", render_confusion(m.evaluation.counts));
    curves.push_back({run.report.rows[i].model, m.evaluation.roc});
  }
  write_roc_svg(curves, dir / "roc.svg");
  if (run.config.repro) write_file(dir / "repro.txt", repro_report(run.config.disease, run.report));
}

// ---------------------------------------------------------------------------
// Published comparison
// ---------------------------------------------------------------------------

namespace {

struct PublishedRow {
  std::string_view model;
  std::optional<double> auc;
  double precision, recall, accuracy, f1;
};

std::vector<PublishedRow> published_rows(DiseaseId d) {
  switch (d) {
    case DiseaseId::heart:
      return {{"LR", 0.89, 0.85, 0.83, 0.85, 0.84},
              {"RF", 0.99, 0.96, 0.95, 0.96, 0.95},
              {"GBT", 0.99, 0.96, 0.95, 0.96, 0.95}};
    case DiseaseId::thyroid:
      return {{"LR", 0.7169, 0.7792, 0.4478, 0.9330, 0.5687},
              {"DT", 0.9099, 0.9136, 0.8284, 0.9753, 0.8689},
              {"RF", 0.8280, 0.8990, 0.6642, 0.9595, 0.7639},
              {"GBT", 0.9263, 0.9094, 0.8619, 0.9779, 0.8851}};
    case DiseaseId::diabetes:
      return {{"LR", 0.9660, 0.9640, 0.9660, 0.9660, 0.9640},
              {"RF", 0.9709, 0.9701, 0.9709, 0.9709, 0.9690},
              {"GBT", 0.9740, 0.9750, 0.9740, 0.9740, 0.9720}};
    case DiseaseId::ckd:
      return {{"LR", std::nullopt, 1.0, 1.0, 1.0, 1.0},
              {"NB", std::nullopt, 0.70, 0.85, 0.78, 0.76},
              {"RF", std::nullopt, 1.0, 1.0, 1.0, 1.0}};
  }
  return {};
}

std::string delta_cell(const std::optional<double>& measured, const std::optional<double>& published) {
  if (!published) return "-";
  const std::string pub = fixed_decimals(*published, 4);
  if (!measured) return pub + " / — / —";
  const double d = *measured - *published;
  return pub + " / " + fixed_decimals(*measured, 4) + " / " + (d >= 0 ? "+" : "") + fixed_decimals(d, 4);
}

}  // namespace

std::string repro_report(DiseaseId disease, const ComparisonReport& report) {
  std::string out = "published vs measured (" + std::string(to_string(disease)) + "), cells: published / measured / delta\n";
  out += "Model | AUC | Precision | Recall | Accuracy | F1-score\n";
  for (const auto& p : published_rows(disease)) {
    const auto it = std::find_if(report.rows.begin(), report.rows.end(), [&](const ReportRow& r) { return r.model == p.model; });
    if (it == report.rows.end()) {
      out += std::string(p.model) + " | not run\n";
      continue;
    }
    const auto& m = it->metrics;
    out += std::string(p.model) + " | " + delta_cell(m.auc, p.auc) + " | " + delta_cell(m.precision, p.precision) +
           " | " + delta_cell(m.recall, p.recall) + " | " + delta_cell(m.accuracy, p.accuracy) + " | " +
           delta_cell(m.f1, p.f1) + "\n";
  }
  return out;
}

}  // namespace clinpred
