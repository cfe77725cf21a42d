#include "clinpred/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "clinpred/errors.hpp"
#include "clinpred/ingest.hpp"
#include "clinpred/rng.hpp"

namespace clinpred {

std::string_view to_string(ImputeRule rule) noexcept {
  switch (rule) {
    case ImputeRule::none:
      return "none";
    case ImputeRule::zero:
      return "zero";
    case ImputeRule::mean:
      return "mean";
    case ImputeRule::mode:
      return "mode";
  }
  return "none";
}

ImputeRule parse_impute_rule(std::string_view text) {
  if (text == "none") return ImputeRule::none;
  if (text == "zero") return ImputeRule::zero;
  if (text == "mean") return ImputeRule::mean;
  if (text == "mode") return ImputeRule::mode;
  throw ConfigError("unknown imputation rule '" + std::string(text) + "' (expected zero, mean, mode or none)");
}

void ImputePolicy::set(std::string column, ImputeRule rule) {
  for (auto& [name, r] : rules) {
    if (name == column) {
      r = rule;
      return;
    }
  }
  rules.emplace_back(std::move(column), rule);
}

ImputeRule ImputePolicy::rule_for(std::string_view column) const noexcept {
  for (const auto& [name, r] : rules) {
    if (name == column) return r;
  }
  return ImputeRule::none;
}

namespace {

std::vector<std::size_t> all_rows(const Table& table) {
  std::vector<std::size_t> rows(table.row_count());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

FittedImputer fit_imputer(const Table& table, const ImputePolicy& policy) {
  const auto rows = all_rows(table);
  return fit_imputer(table, policy, rows);
}

FittedImputer fit_imputer(const Table& table, const ImputePolicy& policy,
                          std::span<const std::size_t> rows) {
  FittedImputer imputer;
  for (const auto& [column, rule] : policy.rules) {
    if (rule == ImputeRule::none) continue;
    const std::size_t c = table.column_index(column);
    const ColumnKind kind = table.schema()[c].kind;
    if ((rule == ImputeRule::zero || rule == ImputeRule::mean) && kind != ColumnKind::numeric) {
      throw ConfigError("column '" + column + "': " + std::string(to_string(rule)) +
                        " imputation requires a numeric column");
    }
    if (rule == ImputeRule::mode && kind != ColumnKind::categorical) {
      throw ConfigError("column '" + column + "': mode imputation requires a categorical column");
    }

    ImputeFill fill{column, rule, Missing{}};
    if (rule == ImputeRule::zero) {
      fill.value = 0.0;
    } else if (rule == ImputeRule::mean) {
      std::vector<double> values;
      for (const auto r : rows) {
        if (const auto* v = std::get_if<double>(&table.at(r, c))) values.push_back(*v);
      }
      if (values.empty()) throw UnfittableColumnError(column);
      const double n = static_cast<double>(values.size());
      fill.value = ordered_sum(std::move(values)) / n;
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto r : rows) {
        if (const auto* s = std::get_if<std::string>(&table.at(r, c))) ++counts[*s];
      }
      if (counts.empty()) throw UnfittableColumnError(column);
      auto best = counts.begin();
      for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      fill.value = best->first;
    }
    imputer.fills.push_back(std::move(fill));
  }
  return imputer;
}

Table apply_imputer(const Table& table, const FittedImputer& imputer) {
  std::vector<std::pair<std::size_t, const Cell*>> plan;
  for (const auto& fill : imputer.fills) {
    const auto c = table.find_column(fill.column);
    if (!c) throw SchemaError("imputer column '" + fill.column + "' is not in the table");
    const ColumnKind kind = table.schema()[*c].kind;
    const bool numeric_fill = is_numeric(fill.value);
    if (numeric_fill != (kind == ColumnKind::numeric)) {
      throw SchemaError("imputer column '" + fill.column + "' has a different kind in the table");
    }
    plan.emplace_back(*c, &fill.value);
  }
  std::vector<Row> rows = table.rows();
  for (auto& row : rows) {
    for (const auto& [c, value] : plan) {
      if (is_missing(row[c])) row[c] = *value;
    }
  }
  return Table(table.schema(), std::move(rows));
}

Table dedupe(const Table& table) {
  std::set<Row> seen;
  std::vector<Row> rows;
  for (const auto& row : table.rows()) {
    if (seen.insert(row).second) rows.push_back(row);
  }
  return Table(table.schema(), std::move(rows));
}

std::pair<Table, std::size_t> drop_missing_target(const Table& table) {
  const std::size_t t = table.target_index();
  std::vector<Row> rows;
  std::size_t dropped = 0;
  for (const auto& row : table.rows()) {
    if (is_missing(row[t])) {
      ++dropped;
    } else {
      rows.push_back(row);
    }
  }
  return {Table(table.schema(), std::move(rows)), dropped};
}

namespace {

Table keep_columns(const Table& table, const std::vector<bool>& keep) {
  Schema schema;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (keep[c]) schema.push_back(table.schema()[c]);
  }
  std::vector<Row> rows;
  rows.reserve(table.row_count());
  for (const auto& row : table.rows()) {
    Row out;
    out.reserve(schema.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (keep[c]) out.push_back(row[c]);
    }
    rows.push_back(std::move(out));
  }
  return Table(std::move(schema), std::move(rows));
}

}  // namespace

NullColumnDrop drop_null_columns(const Table& table) {
  auto [without_missing_target, dropped_rows] = drop_missing_target(table);
  const Table& t = without_missing_target;
  const std::size_t target = t.target_index();
  std::vector<bool> keep(t.column_count(), true);
  NullColumnDrop out;
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    if (c == target) continue;
    const bool has_missing = std::any_of(t.rows().begin(), t.rows().end(),
                                         [c](const Row& row) { return is_missing(row[c]); });
    if (has_missing) {
      keep[c] = false;
      out.dropped_columns.push_back(t.schema()[c].name);
    }
  }
  out.table = keep_columns(t, keep);
  out.dropped_rows = dropped_rows;
  return out;
}

Table drop_columns(const Table& table, std::span<const std::string> columns) {
  std::vector<bool> keep(table.column_count(), true);
  for (const auto& name : columns) keep[table.column_index(name)] = false;
  return keep_columns(table, keep);
}

std::optional<std::size_t> CategoryIndex::index_of(std::string_view token) const noexcept {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == token) return i;
  }
  return std::nullopt;
}

const CategoryIndex* EncoderMap::find(std::string_view column) const noexcept {
  for (const auto& c : columns) {
    if (c.column == column) return &c;
  }
  return nullptr;
}

EncoderMap fit_encoder(const Table& table, std::span<const std::string> columns) {
  const auto rows = all_rows(table);
  return fit_encoder(table, columns, rows);
}

EncoderMap fit_encoder(const Table& table, std::span<const std::string> columns,
                       std::span<const std::size_t> rows) {
  EncoderMap encoder;
  for (const auto& column : columns) {
    const std::size_t c = table.column_index(column);
    if (table.schema()[c].kind != ColumnKind::categorical) {
      throw SchemaError("cannot encode numeric column '" + column + "'");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto r : rows) {
      const Cell& cell = table.at(r, c);
      if (is_missing(cell)) throw EncodeBeforeImputeError(column, r);
      ++counts[std::get<std::string>(cell)];
    }
    std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
    // counts is already in ascending token order, so a stable sort on
    // frequency leaves ties lexicographic.
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    CategoryIndex index{column, {}};
    for (auto& [token, n] : ordered) index.tokens.push_back(std::move(token));
    encoder.columns.push_back(std::move(index));
  }
  return encoder;
}

Table apply_encoder(const Table& table, const EncoderMap& encoder, EncodeStats* stats) {
  Schema schema = table.schema();
  std::vector<std::pair<std::size_t, const CategoryIndex*>> plan;
  for (const auto& index : encoder.columns) {
    const auto c = table.find_column(index.column);
    if (!c) throw SchemaError("encoder column '" + index.column + "' is not in the table");
    if (schema[*c].kind != ColumnKind::categorical) {
      throw SchemaError("encoder column '" + index.column + "' is not categorical");
    }
    schema[*c].kind = ColumnKind::numeric;
    schema[*c].name += kIndexSuffix;
    plan.emplace_back(*c, &index);
  }
  std::vector<std::size_t> unseen(plan.size(), 0);
  std::vector<Row> rows = table.rows();
  for (auto& row : rows) {
    for (std::size_t p = 0; p < plan.size(); ++p) {
      const auto [c, index] = plan[p];
      Cell& cell = row[c];
      if (is_missing(cell)) continue;
      const auto idx = index->index_of(std::get<std::string>(cell));
      if (!idx) ++unseen[p];
      cell = static_cast<double>(idx.value_or(index->unseen_index()));
    }
  }
  if (stats != nullptr) {
    for (std::size_t p = 0; p < plan.size(); ++p) {
      stats->unseen += unseen[p];
      if (unseen[p] > 0) stats->unseen_by_column.emplace_back(plan[p].second->column, unseen[p]);
    }
  }
  return Table(std::move(schema), std::move(rows));
}

Table binarize_target(const Table& table, const std::set<std::string>& positive_labels) {
  if (positive_labels.empty()) throw ConfigError("binarize_target needs at least one positive label");
  const std::size_t t = table.target_index();
  Schema schema = table.schema();
  if (schema[t].kind != ColumnKind::categorical) {
    throw PreconditionError("target column '" + schema[t].name + "' is already numeric");
  }
  schema[t].kind = ColumnKind::numeric;
  std::vector<Row> rows = table.rows();
  for (auto& row : rows) {
    if (is_missing(row[t])) continue;
    row[t] = positive_labels.contains(std::get<std::string>(row[t])) ? 1.0 : 0.0;
  }
  return Table(std::move(schema), std::move(rows));
}

std::size_t ValidationReport::total_nulls() const noexcept {
  std::size_t n = 0;
  for (const auto& [name, count] : null_counts) n += count;
  return n;
}

std::string ValidationReport::format() const {
  std::ostringstream out;
  out << "null cells: " << total_nulls() << '\n';
  for (const auto& [name, count] : null_counts) {
    if (count > 0) out << "  " << name << ": " << count << '\n';
  }
  out << "non-binary target rows: " << non_binary_target << '\n';
  out << "implausible values: " << implausible.size() << '\n';
  for (const auto& f : implausible) {
    out << "  row " << f.row << ' ' << f.column << " = " << format_double(f.value) << " violates "
        << f.rule << '\n';
  }
  return out.str();
}

ValidationReport validate(const Table& table, std::span<const PlausibilityRule> rules) {
  ValidationReport report;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    std::size_t n = 0;
    for (const auto& row : table.rows()) n += is_missing(row[c]) ? 1 : 0;
    report.null_counts.emplace_back(table.schema()[c].name, n);
  }
  if (const auto t = [&]() -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < table.column_count(); ++c) {
          if (table.schema()[c].role == ColumnRole::target) return c;
        }
        return std::nullopt;
      }()) {
    for (const auto& row : table.rows()) {
      const Cell& cell = row[*t];
      if (const auto* v = std::get_if<double>(&cell)) {
        report.non_binary_target += (*v == 0.0 || *v == 1.0) ? 0 : 1;
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        report.non_binary_target += (*s == "0" || *s == "1") ? 0 : 1;
      }
    }
  }
  for (const auto& rule : rules) {
    const auto c = table.find_column(rule.column);
    if (!c) continue;
    const std::string text = "[" + format_double(rule.min) + ", " + format_double(rule.max) + "]";
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      if (const auto* v = std::get_if<double>(&table.at(r, *c))) {
        if (*v < rule.min || *v > rule.max) report.implausible.push_back({rule.column, r, *v, text});
      }
    }
  }
  return report;
}

std::vector<std::string> feature_columns(const Table& table, std::span<const std::string> only) {
  std::vector<std::string> names;
  for (const auto& col : table.schema()) {
    if (col.role != ColumnRole::feature) continue;
    if (!only.empty()) {
      const std::string_view base =
          col.name.ends_with(kIndexSuffix)
              ? std::string_view(col.name).substr(0, col.name.size() - kIndexSuffix.size())
              : std::string_view(col.name);
      const bool wanted = std::any_of(only.begin(), only.end(), [&](const std::string& n) {
        return n == col.name || n == base;
      });
      if (!wanted) continue;
    }
    names.push_back(col.name);
  }
  for (const auto& n : only) {
    const bool found = std::any_of(names.begin(), names.end(), [&](const std::string& name) {
      return name == n || name == n + std::string(kIndexSuffix);
    });
    if (!found) throw UnknownColumnError(n);
  }
  return names;
}

Matrix assemble_features(const Table& table, std::span<const std::string> feature_names) {
  std::vector<std::size_t> cols;
  for (const auto& name : feature_names) cols.push_back(table.column_index(name));
  Matrix x(table.row_count(), cols.size());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const Cell& cell = table.at(r, cols[j]);
      if (is_missing(cell)) {
        throw AssemblyError("column '" + feature_names[j] + "', row " + std::to_string(r) +
                            ": residual missing cell");
      }
      const auto* v = std::get_if<double>(&cell);
      if (v == nullptr) {
        throw AssemblyError("column '" + feature_names[j] + "', row " + std::to_string(r) +
                            ": non-numeric feature (encode it first)");
      }
      x(r, j) = *v;
    }
  }
  return x;
}

std::vector<int> target_labels(const Table& table) {
  const std::size_t t = table.target_index();
  const std::string& name = table.schema()[t].name;
  std::vector<int> labels;
  labels.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto* v = std::get_if<double>(&table.at(r, t));
    if (v == nullptr || (*v != 0.0 && *v != 1.0)) {
      throw AssemblyError("column '" + name + "', row " + std::to_string(r) +
                          ": target must be numeric 0 or 1");
    }
    labels.push_back(*v == 1.0 ? 1 : 0);
  }
  return labels;
}

LabeledMatrix assemble(const Table& table, std::span<const std::string> only) {
  LabeledMatrix m;
  m.feature_names = feature_columns(table, only);
  m.features = assemble_features(table, m.feature_names);
  m.labels = target_labels(table);
  return m;
}

namespace {

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

}  // namespace

SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw SplitError("train_fraction must lie in (0, 1)");
  }
  SplitMix64 rng(spec.seed);
  SplitIndices out;
  auto take = [&](std::vector<std::size_t> idx) {
    rng.shuffle(std::span<std::size_t>(idx));
    const std::size_t n_train = std::min(idx.size(), round_half_up(spec.train_fraction * idx.size()));
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  };
  if (spec.stratified) {
    for (const int cls : {0, 1}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == cls) idx.push_back(i);
      }
      if (idx.size() < 2) {
        throw SplitError("stratified split needs at least 2 rows of class " + std::to_string(cls) +
                         ", found " + std::to_string(idx.size()));
      }
      take(std::move(idx));
    }
  } else {
    std::vector<std::size_t> idx(labels.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    take(std::move(idx));
  }
  if (out.train.empty() || out.test.empty()) {
    throw SplitError("train_fraction " + format_double(spec.train_fraction) + " leaves an empty partition for n=" +
                     std::to_string(labels.size()));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledMatrix, LabeledMatrix> split(const LabeledMatrix& m, const SplitSpec& spec) {
  const auto idx = split_indices(m.labels, spec);
  return {m.select_rows(idx.train), m.select_rows(idx.test)};
}

Table select_rows(const Table& table, std::span<const std::size_t> rows) {
  std::vector<Row> out;
  out.reserve(rows.size());
  for (const auto r : rows) out.push_back(table.row(r));
  return Table(table.schema(), std::move(out));
}

}  // namespace clinpred
