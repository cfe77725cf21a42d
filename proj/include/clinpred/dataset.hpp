#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace clinpred {

enum class ColumnKind { numeric, categorical };
enum class ColumnRole { feature, target, identifier, excluded };

std::string_view to_string(ColumnKind kind) noexcept;
std::string_view to_string(ColumnRole role) noexcept;
ColumnKind parse_column_kind(std::string_view text);
ColumnRole parse_column_role(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  ColumnRole role = ColumnRole::feature;
  std::string description;

  bool operator==(const ColumnSpec&) const = default;
};

using Schema = std::vector<ColumnSpec>;

/// Checks name uniqueness and the single-target rule.
void validate_schema(const Schema& schema);

struct Missing {
  bool operator==(const Missing&) const = default;
  auto operator<=>(const Missing&) const = default;
};

/// A numeric value, a category token, or an explicit missing marker.
using Cell = std::variant<Missing, double, std::string>;
using Row = std::vector<Cell>;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }
inline bool is_numeric(const Cell& c) noexcept { return std::holds_alternative<double>(c); }
inline bool is_category(const Cell& c) noexcept { return std::holds_alternative<std::string>(c); }

/// Rectangular mixed-type table. Construction validates the schema, the row
/// arity, finiteness of numerics, and that every cell matches its column kind.
class Table {
 public:
  Table() = default;
  Table(Schema schema, std::vector<Row> rows);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t column_count() const noexcept { return schema_.size(); }

  const Row& row(std::size_t i) const { return rows_.at(i); }
  const Cell& at(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }

  /// Index of a named column; throws UnknownColumnError.
  std::size_t column_index(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const noexcept;
  std::size_t target_index() const;

  std::size_t missing_count() const noexcept;

  bool operator==(const Table&) const = default;

 private:
  Schema schema_;
  std::vector<Row> rows_;
};

/// The column in row order.
std::vector<Cell> column_view(const Table& table, std::string_view name);

struct ColumnSummary {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::size_t count = 0;
  std::size_t missing = 0;
  // Moments are set for numeric columns with count > 0.
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<double> min;
  std::optional<double> max;
  // Categorical columns only.
  std::map<std::string, std::size_t> frequencies;

  bool operator==(const ColumnSummary&) const = default;
};

struct SummaryStats {
  std::size_t rows = 0;
  std::vector<ColumnSummary> columns;

  const ColumnSummary& column(std::string_view name) const;
  bool operator==(const SummaryStats&) const = default;
};

/// Per-column statistics over non-missing cells. Population std. Values are
/// summed in sorted order, which makes the result independent of row order.
SummaryStats summarize(const Table& table);

/// Sum of values accumulated in ascending order.
double ordered_sum(std::vector<double> values);

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Copy of the listed rows, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Post-assembly model input: finite features and strictly binary labels.
struct LabeledMatrix {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t rows() const noexcept { return features.rows(); }
  std::size_t cols() const noexcept { return features.cols(); }
  std::size_t positives() const noexcept;

  /// Throws PreconditionError if an invariant does not hold.
  void check() const;
  LabeledMatrix select_rows(std::span<const std::size_t> indices) const;

  bool operator==(const LabeledMatrix&) const = default;
};

}  // namespace clinpred
