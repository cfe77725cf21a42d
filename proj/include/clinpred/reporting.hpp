#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clinpred/evaluation.hpp"

namespace clinpred {

struct ReportRow {
  std::string model;  // label shown in the first column
  MetricBundle metrics;
  ThresholdChoice threshold;
  ConfusionCounts counts;

  bool operator==(const ReportRow&) const = default;
};

struct ComparisonReport {
  std::string experiment;
  std::vector<std::string> provenance;  // free-form "key: value" lines
  std::vector<ReportRow> rows;

  /// Throws PreconditionError if empty or if rows disagree on the test
  /// partition size or class counts.
  void check() const;
  bool operator==(const ComparisonReport&) const = default;
};

enum class ReportFormat { text, csv };

ReportFormat parse_report_format(std::string_view text);

/// Round half away from zero to `decimals` places, decided on the decimal
/// value closest to v (so 0.90945 rounds up).
std::string fixed_decimals(double v, int decimals);
/// "90.94%" for 0.9094; "—" when undefined.
std::string percent_cell(const std::optional<double>& v);

/// text: "Model | AUC | Precision | Recall | F1-score | Accuracy" table plus
/// threshold and count lines. csv: one record per model; percentages carry
/// no sign, undefined cells are empty.
std::string render_comparison(const ComparisonReport& r, ReportFormat format = ReportFormat::text);

/// 2x2 grid, rows actual and columns predicted, positive first.
std::string render_confusion(const ConfusionCounts& c);

struct NamedCurve {
  std::string name;
  RocCurve curve;
};

/// Self-contained SVG: unit-square axes, one polyline per curve, a dashed
/// diagonal baseline and legend entries "NAME (AUC = x.xx)".
std::string plot_roc(const std::vector<NamedCurve>& curves);
/// Throws IoError if the file cannot be written.
void write_roc_svg(const std::vector<NamedCurve>& curves, const std::filesystem::path& path);

}  // namespace clinpred
