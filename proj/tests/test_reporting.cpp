#include <filesystem>
#include <fstream>
#include <sstream>

#include "clinpred/errors.hpp"
#include "clinpred/reporting.hpp"
#include "doctest.h"

using namespace clinpred;

namespace {

ReportRow gbt_row() {
  ReportRow r;
  r.model = "GBT";
  r.metrics = {0.9094, 0.8619, 0.9779, 0.8851, 0.9263};
  r.threshold = {0.6, {ThresholdRule::fixed, 0.6}, std::nullopt};
  r.counts = {231, 23, 37, 2427};
  return r;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_SUITE("reporting") {
  TEST_CASE("rounding") {
    CHECK(fixed_decimals(0.90945, 4) == "0.9095");
    CHECK(fixed_decimals(-0.00004, 4) == "0.0000");
    CHECK(fixed_decimals(2.5, 0) == "3");
    CHECK(percent_cell(0.9094) == "90.94%");
    CHECK(percent_cell(std::nullopt) == "—");
  }

  TEST_CASE("comparison table") {
    ComparisonReport r;
    r.rows.push_back(gbt_row());
    const auto text = render_comparison(r);
    CHECK(text.find("GBT | 0.9263 | 90.94% | 86.19% | 88.51% | 97.79%\n") != std::string::npos);

    auto undefined = gbt_row();
    undefined.model = "LR";
    undefined.metrics.precision.reset();
    r.rows.push_back(undefined);
    CHECK(render_comparison(r).find("LR | 0.9263 | — | 86.19%") != std::string::npos);

    auto other = gbt_row();
    other.counts = {1, 1, 1, 1};
    r.rows.push_back(other);
    CHECK_THROWS_AS(render_comparison(r), PreconditionError);
    CHECK_THROWS_AS(render_comparison(ComparisonReport{}), PreconditionError);
  }

  TEST_CASE("csv round trip") {
    ComparisonReport r;
    r.rows.push_back(gbt_row());
    auto odd = gbt_row();
    odd.model = "GBT, \"tuned\"";
    odd.metrics.f1.reset();
    r.rows.push_back(odd);
    std::istringstream in(render_comparison(r, ReportFormat::csv));
    std::string line;
    std::getline(in, line);
    CHECK(split_csv_line(line).size() == 12);
    std::getline(in, line);
    auto cells = split_csv_line(line);
    CHECK(cells[0] == "GBT");
    CHECK(std::stod(cells[1]) == 0.9263);
    CHECK(std::stod(cells[2]) == 90.94);
    CHECK(cells[8] == "231");
    std::getline(in, line);
    cells = split_csv_line(line);
    CHECK(cells[0] == odd.model);
    CHECK(cells[4].empty());
  }

  TEST_CASE("confusion grid") {
    const auto g = render_confusion({112, 16, 15, 59});
    std::istringstream in(g);
    std::string head, top, bottom;
    std::getline(in, head);
    std::getline(in, top);
    std::getline(in, bottom);
    CHECK(top.find("Actual Positive") == 0);
    CHECK(top.find("112") < top.find("15"));
    CHECK(bottom.find("16") < bottom.find("59"));

    const auto only_tn = render_confusion({0, 0, 0, 9});
    CHECK(count(only_tn, " 9\n") == 1);
    CHECK(count(only_tn, " 0") == 3);

    const auto sym = render_confusion({4, 4, 4, 4});
    std::istringstream s(sym);
    std::getline(s, head);
    std::getline(s, top);
    std::getline(s, bottom);
    CHECK(top.substr(top.find('|')) == bottom.substr(bottom.find('|')));
  }

  TEST_CASE("roc svg") {
    const RocCurve diag{{{std::numeric_limits<double>::infinity(), 0, 0}, {0.5, 1, 1}}};
    const auto one = plot_roc({{"LR", diag}});
    CHECK(count(one, "class=\"curve\"") == 1);
    CHECK(count(one, "class=\"baseline\"") == 1);
    CHECK(one.find("LR (AUC = 0.50)") != std::string::npos);
    CHECK(one.find("points=\"60.00,420.00 460.00,20.00\"") != std::string::npos);
    CHECK(one.find("x1=\"60.00\" y1=\"420.00\" x2=\"460.00\" y2=\"20.00\"") != std::string::npos);

    const RocCurve good{{{std::numeric_limits<double>::infinity(), 0, 0}, {0.7, 0, 1}, {0.2, 1, 1}}};
    const auto two = plot_roc({{"RF", good}, {"LR", diag}});
    CHECK(count(two, "class=\"curve\"") == 2);
    CHECK(count(two, "class=\"legend\"") == 2);
    CHECK(two.find("RF (AUC = 1.00)") < two.find("LR (AUC = 0.50)"));
    CHECK(plot_roc({{"RF", good}, {"LR", diag}}) == two);

    const auto path = std::filesystem::temp_directory_path() / "clinpred-roc-test.svg";
    write_roc_svg({{"LR", diag}}, path);
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == one);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(write_roc_svg({{"LR", diag}}, "/nonexistent-dir/x.svg"), IoError);
  }
}
