#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "clinpred/dataset.hpp"

namespace clinpred {

enum class DiseaseId { heart, thyroid, diabetes, ckd };

inline constexpr std::array<DiseaseId, 4> kAllDiseases{DiseaseId::heart, DiseaseId::thyroid,
                                                       DiseaseId::diabetes, DiseaseId::ckd};

std::string_view to_string(DiseaseId id) noexcept;
/// Throws ValidationError listing the valid ids.
DiseaseId parse_disease(std::string_view text);

/// Full attribute list for a disease, with roles assigned.
Schema builtin_schema(DiseaseId id);

/// One line per column: name, kind, role, description (tab separated).
std::string format_schema(const Schema& schema);
Schema parse_schema(std::string_view text);

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Schema columns that may be absent from the header; absent columns are
  /// filled with missing markers. Used for production input without labels.
  std::vector<std::string> optional_columns;
  /// Receives non-fatal notices (ignored columns, unparseable numerics).
  std::vector<std::string>* warnings = nullptr;
};

/// True for "", "?", "NA", "null" (case-insensitive).
bool is_missing_token(std::string_view token) noexcept;

/// RFC-4180 CSV into a Table conforming to `schema`. Quoted fields are taken
/// literally; unquoted missing tokens and unparseable numerics become missing.
Table parse_csv(std::istream& in, const Schema& schema, const CsvOptions& options = {});
Table parse_csv(std::string_view text, const Schema& schema, const CsvOptions& options = {});

/// Inverse of parse_csv: numerics in shortest round-trip form, missing as an
/// empty field, tokens quoted whenever they would otherwise re-parse differently.
std::string to_csv(const Table& table, char delimiter = ',');

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

Table load_disease(DiseaseId id, const std::filesystem::path& path, const CsvOptions& options = {});

struct SynthSpec {
  std::size_t n_rows = 1000;
  std::uint64_t seed = 0;
  double signal_strength = 1.0;  // [0, 1]
  double positive_rate = 0.5;    // (0, 1)
  double missing_rate = 0.0;     // [0, 1), feature cells only

  void check() const;
};

/// Class balance of the source datasets, used when a synth spec leaves it unset.
double default_positive_rate(DiseaseId id) noexcept;

/// Deterministic synthetic table for a disease. Numeric columns follow truncated
/// normals matched to the reference summaries; the positive class has every
/// feature location moved by signal_strength standard deviations.
Table synthesize(DiseaseId id, const SynthSpec& spec);

}  // namespace clinpred
