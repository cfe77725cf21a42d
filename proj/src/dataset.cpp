#include "clinpred/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clinpred/errors.hpp"

namespace clinpred {

std::string_view to_string(ColumnKind kind) noexcept {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

std::string_view to_string(ColumnRole role) noexcept {
  switch (role) {
    case ColumnRole::feature:
      return "feature";
    case ColumnRole::target:
      return "target";
    case ColumnRole::identifier:
      return "identifier";
    case ColumnRole::excluded:
      return "excluded";
  }
  return "feature";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  throw SchemaError("unknown column kind '" + std::string(text) + "'");
}

ColumnRole parse_column_role(std::string_view text) {
  if (text == "feature") return ColumnRole::feature;
  if (text == "target") return ColumnRole::target;
  if (text == "identifier") return ColumnRole::identifier;
  if (text == "excluded") return ColumnRole::excluded;
  throw SchemaError("unknown column role '" + std::string(text) + "'");
}

void validate_schema(const Schema& schema) {
  std::set<std::string_view> seen;
  std::size_t targets = 0;
  for (const auto& col : schema) {
    if (col.name.empty()) throw SchemaError("schema has a column with an empty name");
    if (!seen.insert(col.name).second) {
      throw SchemaError("duplicate column name '" + col.name + "'");
    }
    if (col.role == ColumnRole::target) ++targets;
  }
  if (targets != 1) {
    throw SchemaError("schema must have exactly one target column, found " +
                      std::to_string(targets));
  }
}

Table::Table(Schema schema, std::vector<Row> rows) : schema_(std::move(schema)), rows_(std::move(rows)) {
  validate_schema(schema_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    if (row.size() != schema_.size()) {
      throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                        " cells, schema has " + std::to_string(schema_.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c];
      if (is_missing(cell)) continue;
      if (schema_[c].kind == ColumnKind::numeric) {
        const auto* v = std::get_if<double>(&cell);
        if (v == nullptr || !std::isfinite(*v)) {
          throw SchemaError("row " + std::to_string(r) + ", column '" + schema_[c].name +
                            "': expected a finite numeric cell");
        }
      } else {
        const auto* s = std::get_if<std::string>(&cell);
        if (s == nullptr || s->empty()) {
          throw SchemaError("row " + std::to_string(r) + ", column '" + schema_[c].name +
                            "': expected a non-empty category token");
        }
      }
    }
  }
}

std::optional<std::size_t> Table::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw UnknownColumnError(std::string(name));
}

std::size_t Table::target_index() const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].role == ColumnRole::target) return i;
  }
  throw SchemaError("table has no target column");
}

std::size_t Table::missing_count() const noexcept {
  std::size_t n = 0;
  for (const auto& row : rows_) {
    n += static_cast<std::size_t>(std::count_if(row.begin(), row.end(), is_missing));
  }
  return n;
}

std::vector<Cell> column_view(const Table& table, std::string_view name) {
  const std::size_t c = table.column_index(name);
  std::vector<Cell> out;
  out.reserve(table.row_count());
  for (const auto& row : table.rows()) out.push_back(row[c]);
  return out;
}

double ordered_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (const double v : values) s += v;
  return s;
}

const ColumnSummary& SummaryStats::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw UnknownColumnError(std::string(name));
}

SummaryStats summarize(const Table& table) {
  SummaryStats stats;
  stats.rows = table.row_count();
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto& spec = table.schema()[c];
    ColumnSummary col;
    col.name = spec.name;
    col.kind = spec.kind;
    std::vector<double> values;
    for (const auto& row : table.rows()) {
      const Cell& cell = row[c];
      if (is_missing(cell)) {
        ++col.missing;
      } else if (const auto* v = std::get_if<double>(&cell)) {
        values.push_back(*v);
      } else {
        ++col.frequencies[std::get<std::string>(cell)];
      }
    }
    if (spec.kind == ColumnKind::numeric) {
      col.count = values.size();
      if (!values.empty()) {
        std::sort(values.begin(), values.end());
        const double n = static_cast<double>(values.size());
        const double mean = ordered_sum(values) / n;
        std::vector<double> sq;
        sq.reserve(values.size());
        for (const double v : values) sq.push_back((v - mean) * (v - mean));
        // Rounding can push the mean a hair outside [min, max] for constant columns.
        col.mean = std::clamp(mean, values.front(), values.back());
        col.std = std::sqrt(ordered_sum(std::move(sq)) / n);
        col.min = values.front();
        col.max = values.back();
      }
    } else {
      col.count = stats.rows - col.missing;
    }
    stats.columns.push_back(std::move(col));
  }
  return stats;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw PreconditionError("matrix data size does not match its shape");
  }
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::size_t LabeledMatrix::positives() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void LabeledMatrix::check() const {
  if (labels.size() != features.rows()) {
    throw PreconditionError("label count " + std::to_string(labels.size()) +
                            " does not match row count " + std::to_string(features.rows()));
  }
  if (feature_names.size() != features.cols()) {
    throw PreconditionError("feature name count does not match column count");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) throw PreconditionError("labels must be 0 or 1");
  }
  for (const double v : features.data()) {
    if (!std::isfinite(v)) throw PreconditionError("feature matrix contains a non-finite entry");
  }
}

LabeledMatrix LabeledMatrix::select_rows(std::span<const std::size_t> indices) const {
  LabeledMatrix out;
  out.features = features.select_rows(indices);
  out.labels.reserve(indices.size());
  for (const auto i : indices) out.labels.push_back(labels[i]);
  out.feature_names = feature_names;
  return out;
}

}  // namespace clinpred
