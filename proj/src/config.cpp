#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "clinpred/errors.hpp"
#include "clinpred/pipeline.hpp"

namespace clinpred {

std::string ModelConfig::label() const {
  const auto kind = kind_of(hp);
  return name == to_string(kind) ? std::string(display_name(kind)) : name;
}

namespace {

constexpr ModelKind kAllKinds[] = {ModelKind::lr, ModelKind::dt, ModelKind::rf,
                                   ModelKind::gbt, ModelKind::nb, ModelKind::nn};

std::vector<ModelConfig> all_models() {
  std::vector<ModelConfig> out;
  for (const auto k : kAllKinds) out.push_back({std::string(to_string(k)), default_hyperparams(k), false, {}});
  return out;
}

}  // namespace

PipelineConfig preset_config(DiseaseId id) {
  PipelineConfig c;
  c.experiment = std::string(to_string(id));
  c.disease = id;
  c.data.synth.n_rows = 2000;
  c.data.synth.positive_rate = default_positive_rate(id);
  c.models = all_models();
  auto& p = c.preprocess;
  switch (id) {
    case DiseaseId::heart:
      p.numeric = ImputeRule::zero;
      p.categorical = ImputeRule::mode;
      c.split.train_fraction = 0.8;
      c.split.stratified = true;
      break;
    case DiseaseId::thyroid:
      p.numeric = ImputeRule::mean;
      p.categorical = ImputeRule::mode;
      p.positive_labels = {"A", "B", "C", "D", "E", "F", "G", "H", "hyperthyroid", "hypothyroid", "1"};
      p.plausibility = {{"age", 0.0, 120.0}};
      c.split.train_fraction = 0.7;
      c.split.stratified = true;
      break;
    case DiseaseId::diabetes:
      p.numeric = ImputeRule::mean;
      p.categorical = ImputeRule::mode;
      p.dedupe = true;
      c.split.train_fraction = 0.8;
      c.split.stratified = true;
      break;
    case DiseaseId::ckd:
      p.drop_null_columns = true;
      c.split.train_fraction = 0.8;
      c.split.stratified = false;
      break;
  }
  return c;
}

void PipelineConfig::check() const {
  if (models.empty()) throw ConfigError("model: at least one model is required");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!names.insert(m.name).second) throw ConfigError("model." + m.name + ": declared twice");
    try {
      check_hyperparams(m.hp);
    } catch (const ConfigError& e) {
      throw ConfigError("model." + m.name + ": " + e.what());
    }
  }
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    throw ConfigError("split.train_fraction: must lie strictly between 0 and 1");
  }
  if (workers == 0) throw ConfigError("workers: must be at least 1");
  if (!data.file) {
    if (data.schema_file) throw ConfigError("data.schema: a custom schema needs data.file");
    try {
      data.synth.check();
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("data.synth: ") + e.what());
    }
  }
  for (const auto& [column, rule] : preprocess.overrides.rules) {
    (void)rule;
    if (column.empty()) throw ConfigError("preprocess.impute: empty column name");
  }
  for (const auto& r : preprocess.plausibility) {
    if (!(r.min <= r.max)) throw ConfigError("preprocess.plausibility." + r.column + ": min exceeds max");
  }
  if (preprocess.numeric == ImputeRule::mode) {
    throw ConfigError("preprocess.impute.numeric: mode imputation applies to categorical columns only");
  }
  if (preprocess.categorical == ImputeRule::zero || preprocess.categorical == ImputeRule::mean) {
    throw ConfigError("preprocess.impute.categorical: only mode or none apply to categorical columns");
  }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::size_t line;
  std::string key;
  std::string value;
};

[[noreturn]] void bad(const Entry& e, const std::string& what) {
  throw ConfigError("line " + std::to_string(e.line) + ": " + e.key + ": " + what);
}

double to_double(const Entry& e) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size() || e.value.empty() || !std::isfinite(v)) {
    bad(e, "expected a number (got '" + e.value + "')");
  }
  return v;
}

long long to_int(const Entry& e) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size() || e.value.empty()) {
    bad(e, "expected an integer (got '" + e.value + "')");
  }
  return v;
}

int to_int32(const Entry& e) {
  const auto v = to_int(e);
  if (v < INT32_MIN || v > INT32_MAX) bad(e, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t to_u64(const Entry& e) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size() || e.value.empty()) {
    bad(e, "expected an unsigned integer (got '" + e.value + "')");
  }
  return v;
}

bool to_bool(const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1" || e.value == "on") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0" || e.value == "off") return false;
  bad(e, "expected true or false (got '" + e.value + "')");
}

std::vector<std::string> to_list(const Entry& e) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= e.value.size()) {
    auto end = e.value.find(',', start);
    if (end == std::string::npos) end = e.value.size();
    auto item = trim(std::string_view(e.value).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

template <typename Fn>
auto wrap(const Entry& e, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& err) {
    bad(e, err.what());
  } catch (const ValidationError& err) {
    bad(e, err.what());
  }
}

void set_hyper(ModelConfig& m, const std::string& field, const Entry& e) {
  const auto unknown = [&] {
    bad(e, "unknown hyperparameter '" + field + "' for kind " + std::string(to_string(kind_of(m.hp))));
  };
  std::visit(
      [&](auto& h) {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, LrHyper>) {
          if (field == "learning_rate") h.learning_rate = to_double(e);
          else if (field == "max_iters") h.max_iters = to_int32(e);
          else if (field == "tolerance") h.tolerance = to_double(e);
          else if (field == "l2") h.l2 = to_double(e);
          else unknown();
        } else if constexpr (std::is_same_v<T, TreeHyper>) {
          if (field == "max_depth") h.max_depth = to_int32(e);
          else if (field == "min_samples_leaf") h.min_samples_leaf = to_int32(e);
          else unknown();
        } else if constexpr (std::is_same_v<T, ForestHyper>) {
          if (field == "n_trees") h.n_trees = to_int32(e);
          else if (field == "m_try") h.m_try = to_int32(e);
          else if (field == "max_depth") h.max_depth = to_int32(e);
          else if (field == "min_samples_leaf") h.min_samples_leaf = to_int32(e);
          else if (field == "bootstrap") h.bootstrap = to_bool(e);
          else if (field == "seed") {
            h.seed = to_u64(e);
            m.seed_set = true;
          } else unknown();
        } else if constexpr (std::is_same_v<T, GbtHyper>) {
          if (field == "n_trees") h.n_trees = to_int32(e);
          else if (field == "learning_rate") h.learning_rate = to_double(e);
          else if (field == "max_depth") h.max_depth = to_int32(e);
          else if (field == "min_samples_leaf") h.min_samples_leaf = to_int32(e);
          else if (field == "raw_margin") h.raw_margin = to_bool(e);
          else unknown();
        } else if constexpr (std::is_same_v<T, NbHyper>) {
          if (field == "alpha") h.alpha = to_double(e);
          else if (field == "variance_floor") h.variance_floor = to_double(e);
          else if (field == "categorical_columns") {
            if (e.value == "auto") m.nb_categorical.reset();
            else m.nb_categorical = to_list(e);
          } else unknown();
        } else {
          if (field == "hidden") h.hidden = to_int32(e);
          else if (field == "learning_rate") h.learning_rate = to_double(e);
          else if (field == "epochs") h.epochs = to_int32(e);
          else if (field == "batch_size") h.batch_size = to_int32(e);
          else if (field == "l2") h.l2 = to_double(e);
          else if (field == "seed") {
            h.seed = to_u64(e);
            m.seed_set = true;
          } else unknown();
        }
      },
      m.hp);
}

void apply_entry(PipelineConfig& c, const Entry& e) {
  const std::string& k = e.key;
  auto& p = c.preprocess;
  if (k == "preset" || k == "disease") return;
  if (k == "experiment") {
    c.experiment = e.value;
  } else if (k == "seed") {
    c.seed = to_u64(e);
  } else if (k == "workers") {
    const auto w = to_int(e);
    if (w < 1 || w > 1024) bad(e, "must lie in [1, 1024]");
    c.workers = static_cast<unsigned>(w);
  } else if (k == "out") {
    c.out = e.value;
  } else if (k == "repro") {
    c.repro = to_bool(e);
  } else if (k == "threshold") {
    c.threshold = wrap(e, [&] { return parse_threshold_criterion(e.value); });
  } else if (k == "averaging") {
    c.averaging = wrap(e, [&] { return parse_averaging(e.value); });
  } else if (k == "data.file") {
    c.data.file = e.value;
  } else if (k == "data.schema") {
    c.data.schema_file = e.value;
  } else if (k == "data.synth.rows") {
    const auto n = to_int(e);
    if (n < 1) bad(e, "must be at least 1");
    c.data.synth.n_rows = static_cast<std::size_t>(n);
  } else if (k == "data.synth.seed") {
    c.data.synth.seed = to_u64(e);
    c.data.synth_seed_set = true;
  } else if (k == "data.synth.signal") {
    c.data.synth.signal_strength = to_double(e);
  } else if (k == "data.synth.positive_rate") {
    c.data.synth.positive_rate = to_double(e);
  } else if (k == "data.synth.missing_rate") {
    c.data.synth.missing_rate = to_double(e);
  } else if (k == "split.train_fraction") {
    c.split.train_fraction = to_double(e);
  } else if (k == "split.stratified") {
    c.split.stratified = to_bool(e);
  } else if (k == "split.seed") {
    c.split.seed = to_u64(e);
    c.split_seed_set = true;
  } else if (k == "preprocess.impute.numeric") {
    p.numeric = wrap(e, [&] { return parse_impute_rule(e.value); });
  } else if (k == "preprocess.impute.categorical") {
    p.categorical = wrap(e, [&] { return parse_impute_rule(e.value); });
  } else if (k.starts_with("preprocess.impute.")) {
    const auto column = k.substr(std::string_view("preprocess.impute.").size());
    p.overrides.set(column, wrap(e, [&] { return parse_impute_rule(e.value); }));
  } else if (k == "preprocess.dedupe") {
    p.dedupe = to_bool(e);
  } else if (k == "preprocess.drop_null_columns") {
    p.drop_null_columns = to_bool(e);
  } else if (k == "preprocess.encode") {
    if (e.value == "auto") p.encode.reset();
    else p.encode = to_list(e);
  } else if (k == "preprocess.positive_labels") {
    const auto items = to_list(e);
    p.positive_labels = {items.begin(), items.end()};
  } else if (k.starts_with("preprocess.plausibility.")) {
    const auto column = k.substr(std::string_view("preprocess.plausibility.").size());
    const auto items = to_list(e);
    if (items.size() != 2) bad(e, "expected min,max");
    const Entry lo{e.line, k, items[0]};
    const Entry hi{e.line, k, items[1]};
    std::erase_if(p.plausibility, [&](const PlausibilityRule& r) { return r.column == column; });
    p.plausibility.push_back({column, to_double(lo), to_double(hi)});
  } else if (k == "preprocess.features") {
    p.features = to_list(e);
  } else if (k == "preprocess.drop") {
    p.drop = to_list(e);
  } else if (k == "preprocess.fit_on") {
    if (e.value == "all") p.fit_on_train_only = false;
    else if (e.value == "train") p.fit_on_train_only = true;
    else bad(e, "expected all or train");
  } else {
    bad(e, "unknown key");
  }
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    Entry e{line_no, trim(std::string_view(stripped).substr(0, eq)), trim(std::string_view(stripped).substr(eq + 1))};
    if (e.key.empty()) throw ParseError(line_no, "empty key");
    entries.push_back(std::move(e));
  }

  PipelineConfig c;
  const Entry* preset = nullptr;
  const Entry* disease = nullptr;
  for (const auto& e : entries) {
    if (e.key == "preset") preset = &e;
    if (e.key == "disease") disease = &e;
  }
  if (preset != nullptr) {
    c = preset_config(wrap(*preset, [&] { return parse_disease(preset->value); }));
    if (disease != nullptr && wrap(*disease, [&] { return parse_disease(disease->value); }) != c.disease) {
      bad(*disease, "conflicts with preset '" + preset->value + "'");
    }
  } else if (disease != nullptr) {
    const auto id = wrap(*disease, [&] { return parse_disease(disease->value); });
    c.disease = id;
    c.experiment = std::string(to_string(id));
    c.data.synth.n_rows = 2000;
    c.data.synth.positive_rate = default_positive_rate(id);
  } else {
    throw ConfigError("config needs a 'preset' or 'disease' key");
  }

  // Models: declared blocks replace the preset list, in order of first mention.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Entry*>> blocks;
  for (const auto& e : entries) {
    if (!e.key.starts_with("model.")) {
      apply_entry(c, e);
      continue;
    }
    const auto rest = e.key.substr(6);
    const auto dot = rest.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == rest.size()) bad(e, "expected model.<name>.<field>");
    const auto name = rest.substr(0, dot);
    if (!blocks.contains(name)) order.push_back(name);
    blocks[name].push_back(&e);
  }
  if (!order.empty()) {
    c.models.clear();
    for (const auto& name : order) {
      const auto& lines = blocks[name];
      const Entry* kind_line = nullptr;
      for (const auto* e : lines) {
        if (e->key == "model." + name + ".kind") kind_line = e;
      }
      ModelConfig m{name, LrHyper{}, false, {}};
      if (kind_line != nullptr) {
        m.hp = default_hyperparams(wrap(*kind_line, [&] { return parse_model_kind(kind_line->value); }));
      } else {
        try {
          m.hp = default_hyperparams(parse_model_kind(name));
        } catch (const ConfigError&) {
          throw ConfigError("model." + name + ".kind: required (the name is not a model kind)");
        }
      }
      for (const auto* e : lines) {
        if (e == kind_line) continue;
        set_hyper(m, e->key.substr(6 + name.size() + 1), *e);
      }
      c.models.push_back(std::move(m));
    }
  }
  c.check();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  // Data paths are relative to the config file.
  const auto base = path.parent_path();
  if (c.data.file && c.data.file->is_relative()) c.data.file = base / *c.data.file;
  if (c.data.schema_file && c.data.schema_file->is_relative()) c.data.schema_file = base / *c.data.schema_file;
  return c;
}

}  // namespace clinpred
