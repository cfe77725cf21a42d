#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clinpred/dataset.hpp"

namespace clinpred {

// ---------------------------------------------------------------------------
// Imputation
// ---------------------------------------------------------------------------

enum class ImputeRule { none, zero, mean, mode };

std::string_view to_string(ImputeRule rule) noexcept;
ImputeRule parse_impute_rule(std::string_view text);

/// Per-column rule. zero and mean apply to numeric columns, mode to categorical.
struct ImputePolicy {
  std::vector<std::pair<std::string, ImputeRule>> rules;

  void set(std::string column, ImputeRule rule);
  ImputeRule rule_for(std::string_view column) const noexcept;
};

struct ImputeFill {
  std::string column;
  ImputeRule rule = ImputeRule::none;
  Cell value;

  bool operator==(const ImputeFill&) const = default;
};

struct FittedImputer {
  std::vector<ImputeFill> fills;

  bool operator==(const FittedImputer&) const = default;
};

/// Throws ConfigError on a rule/kind mismatch and UnfittableColumnError when a
/// mean or mode rule meets a column with no observed value. Mode ties resolve
/// to the lexicographically smallest token.
FittedImputer fit_imputer(const Table& table, const ImputePolicy& policy);
FittedImputer fit_imputer(const Table& table, const ImputePolicy& policy,
                          std::span<const std::size_t> rows);

Table apply_imputer(const Table& table, const FittedImputer& imputer);

// ---------------------------------------------------------------------------
// Row / column cleaning
// ---------------------------------------------------------------------------

/// Keeps the first occurrence of each fully identical row.
Table dedupe(const Table& table);

struct NullColumnDrop {
  Table table;
  std::vector<std::string> dropped_columns;
  std::size_t dropped_rows = 0;  // rows removed for a missing target
};

/// Removes every column holding a missing cell. The target column is never
/// removed; rows with a missing target are dropped instead.
NullColumnDrop drop_null_columns(const Table& table);

/// Removes rows whose target cell is missing.
std::pair<Table, std::size_t> drop_missing_target(const Table& table);

/// Removes the named columns. Unknown names throw.
Table drop_columns(const Table& table, std::span<const std::string> columns);

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

/// Suffix given to a categorical column once it is replaced by its index.
inline constexpr std::string_view kIndexSuffix = "_index";

struct CategoryIndex {
  std::string column;
  std::vector<std::string> tokens;  // position = index

  std::optional<std::size_t> index_of(std::string_view token) const noexcept;
  std::size_t unseen_index() const noexcept { return tokens.size(); }

  bool operator==(const CategoryIndex&) const = default;
};

/// Per-column token -> index maps ordered by descending training frequency,
/// ties by ascending token.
struct EncoderMap {
  std::vector<CategoryIndex> columns;

  const CategoryIndex* find(std::string_view column) const noexcept;
  bool operator==(const EncoderMap&) const = default;
};

EncoderMap fit_encoder(const Table& table, std::span<const std::string> columns);
EncoderMap fit_encoder(const Table& table, std::span<const std::string> columns,
                       std::span<const std::size_t> rows);

struct EncodeStats {
  std::size_t unseen = 0;
  std::vector<std::pair<std::string, std::size_t>> unseen_by_column;
};

/// Encoded columns become numeric and are renamed with kIndexSuffix. Unseen
/// tokens map to the reserved index k and are counted in `stats`.
Table apply_encoder(const Table& table, const EncoderMap& encoder, EncodeStats* stats = nullptr);

/// Categorical target -> numeric 0/1. Missing targets stay missing.
Table binarize_target(const Table& table, const std::set<std::string>& positive_labels);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct PlausibilityRule {
  std::string column;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const PlausibilityRule&) const = default;
};

struct PlausibilityFlag {
  std::string column;
  std::size_t row = 0;
  double value = 0.0;
  std::string rule;

  bool operator==(const PlausibilityFlag&) const = default;
};

struct ValidationReport {
  std::vector<std::pair<std::string, std::size_t>> null_counts;  // every column
  std::size_t non_binary_target = 0;
  std::vector<PlausibilityFlag> implausible;

  std::size_t total_nulls() const noexcept;
  bool clean() const noexcept { return total_nulls() == 0 && non_binary_target == 0 && implausible.empty(); }
  std::string format() const;
};

/// Reports; never corrects.
ValidationReport validate(const Table& table, std::span<const PlausibilityRule> rules = {});

// ---------------------------------------------------------------------------
// Assembly and splitting
// ---------------------------------------------------------------------------

/// Feature columns (role = feature) in schema order, or `only` when given.
std::vector<std::string> feature_columns(const Table& table, std::span<const std::string> only = {});

/// Throws AssemblyError naming column and row for a residual missing cell, a
/// non-numeric feature, or a non-binary target.
LabeledMatrix assemble(const Table& table, std::span<const std::string> only = {});

/// Feature matrix for the named columns, without labels (production input).
Matrix assemble_features(const Table& table, std::span<const std::string> feature_names);

struct SplitSpec {
  double train_fraction = 0.8;
  bool stratified = true;
  std::uint64_t seed = 0;

  bool operator==(const SplitSpec&) const = default;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Stratified mode shuffles each class independently and sends
/// round-half-up(train_fraction * class size) rows to train.
SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec);

std::pair<LabeledMatrix, LabeledMatrix> split(const LabeledMatrix& m, const SplitSpec& spec);

/// Row subset of a table.
Table select_rows(const Table& table, std::span<const std::size_t> rows);

/// Labels of a table whose target column is numeric 0/1 (missing -> error).
std::vector<int> target_labels(const Table& table);

}  // namespace clinpred
