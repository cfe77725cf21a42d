#include "clinpred/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "clinpred/errors.hpp"

namespace clinpred {
namespace {

constexpr std::string_view kUndefined = "—";

// Decimal text of |v| * 10^shift rounded half away from zero.
std::string round_decimal(double v, int shift, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(v), std::chars_format::fixed);
  std::string text(buf, res.ptr);
  const auto dot = text.find('.');
  std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  std::string frac = dot == std::string::npos ? std::string() : text.substr(dot + 1);
  while (static_cast<int>(frac.size()) < shift + decimals + 1) frac += '0';
  whole += frac.substr(0, static_cast<std::size_t>(shift));
  frac.erase(0, static_cast<std::size_t>(shift));

  std::string digits = whole + frac.substr(0, static_cast<std::size_t>(decimals));
  if (frac[static_cast<std::size_t>(decimals)] >= '5') {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == '9') digits[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      digits.insert(digits.begin(), '1');
    } else {
      ++digits[static_cast<std::size_t>(i)];
    }
  }
  std::string int_part = digits.substr(0, digits.size() - static_cast<std::size_t>(decimals));
  const auto nz = int_part.find_first_not_of('0');
  int_part = nz == std::string::npos ? "0" : int_part.substr(nz);
  std::string out = int_part;
  if (decimals > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(decimals));
  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  return (v < 0 && !zero ? "-" : "") + out;
}

std::string csv_percent(const std::optional<double>& v) { return v ? round_decimal(*v, 2, 2) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string svg_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::text;
  if (text == "csv") return ReportFormat::csv;
  throw ConfigError("unknown report format '" + std::string(text) + "' (expected text or csv)");
}

std::string fixed_decimals(double v, int decimals) { return round_decimal(v, 0, decimals); }

std::string percent_cell(const std::optional<double>& v) {
  return v ? round_decimal(*v, 2, 2) + "%" : std::string(kUndefined);
}

void ComparisonReport::check() const {
  if (rows.empty()) throw PreconditionError("comparison report has no rows");
  const auto& first = rows.front().counts;
  for (const auto& r : rows) {
    if (r.counts.total() != first.total() || r.counts.positives() != first.positives()) {
      throw PreconditionError("report row '" + r.model + "' was evaluated on a different test partition");
    }
  }
}

std::string render_comparison(const ComparisonReport& r, ReportFormat format) {
  r.check();
  std::string out;
  if (format == ReportFormat::csv) {
    out += "model,auc,precision,recall,f1,accuracy,threshold,criterion,tp,fp,fn,tn\n";
    for (const auto& row : r.rows) {
      const auto& m = row.metrics;
      out += csv_field(row.model) + ',' + (m.auc ? fixed_decimals(*m.auc, 4) : std::string()) + ',' +
             csv_percent(m.precision) + ',' + csv_percent(m.recall) + ',' + csv_percent(m.f1) + ',' +
             csv_percent(m.accuracy) + ',' + fixed_decimals(row.threshold.threshold, 4) + ',' +
             to_string(row.threshold.criterion) + ',' + std::to_string(row.counts.tp) + ',' +
             std::to_string(row.counts.fp) + ',' + std::to_string(row.counts.fn) + ',' +
             std::to_string(row.counts.tn) + '\n';
    }
    return out;
  }

  if (!r.experiment.empty()) out += "experiment: " + r.experiment + "\n";
  for (const auto& line : r.provenance) out += line + "\n";
  const auto& c0 = r.rows.front().counts;
  out += "test rows: " + std::to_string(c0.total()) + " (" + std::to_string(c0.positives()) + " positive)\n\n";
  out += "Model | AUC | Precision | Recall | F1-score | Accuracy\n";
  for (const auto& row : r.rows) {
    const auto& m = row.metrics;
    out += row.model + " | " + (m.auc ? fixed_decimals(*m.auc, 4) : std::string(kUndefined)) + " | " +
           percent_cell(m.precision) + " | " + percent_cell(m.recall) + " | " + percent_cell(m.f1) + " | " +
           percent_cell(m.accuracy) + "\n";
  }
  out += "\n";
  for (const auto& row : r.rows) {
    const auto& c = row.counts;
    out += row.model + ": threshold " + fixed_decimals(row.threshold.threshold, 4) + " (" +
           to_string(row.threshold.criterion) + "), tp=" + std::to_string(c.tp) + " fp=" + std::to_string(c.fp) +
           " fn=" + std::to_string(c.fn) + " tn=" + std::to_string(c.tn) + "\n";
  }
  return out;
}

std::string render_confusion(const ConfusionCounts& c) {
  const std::string cells[2][2] = {{std::to_string(c.tp), std::to_string(c.fn)},
                                   {std::to_string(c.fp), std::to_string(c.tn)}};
  const std::string col_head[2] = {"Predicted Positive", "Predicted Negative"};
  const std::string row_head[2] = {"Actual Positive", "Actual Negative"};
  std::size_t w[2];
  for (int j = 0; j < 2; ++j) w[j] = std::max({col_head[j].size(), cells[0][j].size(), cells[1][j].size()});
  const std::size_t lead = row_head[0].size();

  const auto pad = [](const std::string& s, std::size_t width) { return std::string(width - s.size(), ' ') + s; };
  std::string out = std::string(lead, ' ') + " | " + pad(col_head[0], w[0]) + " | " + pad(col_head[1], w[1]) + "\n";
  for (int i = 0; i < 2; ++i) {
    out += row_head[i] + " | " + pad(cells[i][0], w[0]) + " | " + pad(cells[i][1], w[1]) + "\n";
  }
  return out;
}

std::string plot_roc(const std::vector<NamedCurve>& curves) {
  if (curves.empty()) throw PreconditionError("ROC plot needs at least one curve");
  constexpr double kLeft = 60.0;
  constexpr double kTop = 20.0;
  constexpr double kSize = 400.0;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                            "#e377c2", "#7f7f7f"};
  const auto px = [&](double fpr) { return fixed_decimals(kLeft + fpr * kSize, 2); };
  const auto py = [&](double tpr) { return fixed_decimals(kTop + (1.0 - tpr) * kSize, 2); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<rect class=\"axes\" x=\"" + px(0) + "\" y=\"" + py(1) + "\" width=\"400\" height=\"400\" fill=\"none\" "
       "stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = k / 4.0;
    const auto label = fixed_decimals(t, 2);
    s += "<text x=\"" + px(t) + "\" y=\"" + fixed_decimals(kTop + kSize + 16, 2) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + label + "</text>\n";
    s += "<text x=\"" + fixed_decimals(kLeft - 6, 2) + "\" y=\"" + py(t) +
         "\" font-size=\"11\" text-anchor=\"end\" dominant-baseline=\"middle\">" + label + "</text>\n";
  }
  s += "<text x=\"" + px(0.5) + "\" y=\"" + fixed_decimals(kTop + kSize + 34, 2) +
       "\" font-size=\"12\" text-anchor=\"middle\">False Positive Rate</text>\n";
  s += "<text x=\"16\" y=\"" + py(0.5) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       py(0.5) + ")\">True Positive Rate</text>\n";
  s += "<line class=\"baseline\" x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(1) + "\" y2=\"" + py(1) +
       "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    s += "<polyline class=\"curve\" fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"2\" points=\"";
    const auto& pts = curves[i].curve.points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k > 0) s += ' ';
      s += px(pts[k].fpr) + "," + py(pts[k].tpr);
    }
    s += "\"/>\n";
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    const double y = kTop + 20.0 + 18.0 * static_cast<double>(i);
    const double lx = kLeft + kSize + 12.0;
    s += "<line x1=\"" + fixed_decimals(lx, 2) + "\" y1=\"" + fixed_decimals(y, 2) + "\" x2=\"" +
         fixed_decimals(lx + 20, 2) + "\" y2=\"" + fixed_decimals(y, 2) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text class=\"legend\" x=\"" + fixed_decimals(lx + 26, 2) + "\" y=\"" + fixed_decimals(y, 2) +
         "\" font-size=\"11\" dominant-baseline=\"middle\">" + svg_escape(curves[i].name) +
         " (AUC = " + fixed_decimals(auc(curves[i].curve), 2) + ")</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_roc_svg(const std::vector<NamedCurve>& curves, const std::filesystem::path& path) {
  const auto svg = plot_roc(curves);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << svg;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace clinpred
