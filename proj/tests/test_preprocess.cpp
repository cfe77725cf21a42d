#include <set>

#include "clinpred/errors.hpp"
#include "clinpred/ingest.hpp"
#include "clinpred/preprocess.hpp"
#include "doctest.h"

using namespace clinpred;

namespace {

const Schema kSchema{{"id", ColumnKind::numeric, ColumnRole::identifier, ""},
                     {"x", ColumnKind::numeric, ColumnRole::feature, ""},
                     {"c", ColumnKind::categorical, ColumnRole::feature, ""},
                     {"y", ColumnKind::numeric, ColumnRole::target, ""}};

Cell tok(const char* s) { return std::string(s); }

Table table(std::vector<Row> rows) { return Table(kSchema, std::move(rows)); }

ImputePolicy policy(std::initializer_list<std::pair<const char*, ImputeRule>> rules) {
  ImputePolicy p;
  for (const auto& [c, r] : rules) p.set(c, r);
  return p;
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("imputation fills") {
    const auto t = table({{0.0, 1.0, tok("a"), 0.0}, {1.0, Missing{}, tok("a"), 1.0},
                          {2.0, 3.0, tok("b"), 0.0}, {3.0, 2.0, Missing{}, 1.0}});
    const auto fit = fit_imputer(t, policy({{"x", ImputeRule::mean}, {"c", ImputeRule::mode}}));
    REQUIRE(fit.fills.size() == 2);
    CHECK(std::get<double>(fit.fills[0].value) == 2.0);
    CHECK(std::get<std::string>(fit.fills[1].value) == "a");
    const auto out = apply_imputer(t, fit);
    CHECK(out.missing_count() == 0);
    CHECK(std::get<double>(out.at(1, 1)) == 2.0);

    const auto tie = table({{0.0, 1.0, tok("b"), 0.0}, {1.0, 1.0, tok("a"), 1.0}});
    CHECK(std::get<std::string>(fit_imputer(tie, policy({{"c", ImputeRule::mode}})).fills[0].value) == "a");

    const auto zero = apply_imputer(table({{0.0, 120.0, tok("a"), 0.0}, {1.0, Missing{}, tok("a"), 1.0}}),
                                    fit_imputer(t, policy({{"x", ImputeRule::zero}})));
    CHECK(std::get<double>(zero.at(1, 1)) == 0.0);
    CHECK(std::get<double>(zero.at(0, 1)) == 120.0);

    const auto dense = table({{0.0, 1.0, tok("a"), 0.0}});
    CHECK(apply_imputer(dense, fit) == dense);
  }

  TEST_CASE("imputation errors") {
    const auto t = table({{0.0, Missing{}, Missing{}, 0.0}});
    CHECK_THROWS_AS(fit_imputer(t, policy({{"x", ImputeRule::mean}})), UnfittableColumnError);
    CHECK_THROWS_AS(fit_imputer(t, policy({{"c", ImputeRule::mode}})), UnfittableColumnError);
    CHECK_THROWS_AS(fit_imputer(t, policy({{"x", ImputeRule::mode}})), ConfigError);
  }

  TEST_CASE("dedupe") {
    const Row r1{0.0, 1.0, tok("a"), 0.0};
    const Row r2{1.0, 1.0, tok("a"), 0.0};
    CHECK(dedupe(table({r1, r1, r2})) == table({r1, r2}));
    CHECK(dedupe(table({r1, r2})) == table({r1, r2}));
  }

  TEST_CASE("null columns") {
    const auto t = table({{0.0, 1.0, Missing{}, 0.0}, {1.0, 2.0, tok("a"), 1.0}});
    const auto d = drop_null_columns(t);
    CHECK(d.table.column_count() == 3);
    CHECK(d.dropped_columns == std::vector<std::string>{"c"});
    const auto dense = table({{0.0, 1.0, tok("a"), 0.0}});
    CHECK(drop_null_columns(dense).table == dense);
    CHECK(drop_null_columns(dense).dropped_columns.empty());

    std::vector<Row> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({double(i), 1.0, tok("a"), i == 4 ? Cell(Missing{}) : Cell(1.0)});
    const auto tgt = drop_null_columns(table(rows));
    CHECK(tgt.table.row_count() == 9);
    CHECK(tgt.table.find_column("y"));
  }

  TEST_CASE("encoder ordering") {
    const auto enc_of = [](std::vector<const char*> toks) {
      std::vector<Row> rows;
      for (const auto* t : toks) rows.push_back({0.0, 0.0, tok(t), 0.0});
      const std::vector<std::string> cols{"c"};
      return fit_encoder(table(rows), cols).columns.at(0).tokens;
    };
    CHECK(enc_of({"f", "m", "f"}) == std::vector<std::string>{"f", "m"});
    CHECK(enc_of({"x", "y"}) == std::vector<std::string>{"x", "y"});
    CHECK(enc_of({"b", "b", "a", "a", "c"}) == std::vector<std::string>{"a", "b", "c"});
  }

  TEST_CASE("encoder application") {
    const std::vector<std::string> cols{"c"};
    const auto enc = fit_encoder(table({{0.0, 0.0, tok("f"), 0.0}, {0.0, 0.0, tok("m"), 0.0}, {0.0, 0.0, tok("f"), 0.0}}), cols);
    EncodeStats stats;
    const auto out = apply_encoder(table({{0.0, 0.0, tok("m"), 0.0}, {0.0, 0.0, tok("f"), 0.0}, {0.0, 0.0, tok("u"), 0.0}}),
                                   enc, &stats);
    CHECK(out.schema()[2].name == "c_index");
    CHECK(out.schema()[2].kind == ColumnKind::numeric);
    CHECK(std::get<double>(out.at(0, 2)) == 1.0);
    CHECK(std::get<double>(out.at(1, 2)) == 0.0);
    CHECK(std::get<double>(out.at(2, 2)) == 2.0);
    CHECK(stats.unseen == 1);
    CHECK(apply_encoder(table({}), enc).row_count() == 0);
    CHECK(is_missing(apply_encoder(table({{0.0, 0.0, Missing{}, 0.0}}), enc).at(0, 2)));
    CHECK_THROWS_AS(fit_encoder(table({{0.0, 0.0, Missing{}, 0.0}}), cols), EncodeBeforeImputeError);
  }

  TEST_CASE("target binarization") {
    const Schema s{{"x", ColumnKind::numeric, ColumnRole::feature, ""},
                   {"t", ColumnKind::categorical, ColumnRole::target, ""}};
    const Table t(s, {{1.0, tok("hyperthyroid")}, {2.0, tok("-")}, {3.0, tok("hypothyroid")}});
    const auto b = binarize_target(t, {"hyperthyroid", "hypothyroid"});
    CHECK(target_labels(b) == std::vector<int>{1, 0, 1});
    CHECK(target_labels(binarize_target(t, {"hyperthyroid", "hypothyroid", "-"})) == std::vector<int>{1, 1, 1});
    CHECK(target_labels(binarize_target(t, {"other"})) == std::vector<int>{0, 0, 0});
    CHECK_THROWS_AS(binarize_target(t, {}), ConfigError);
  }

  TEST_CASE("validation reports without correcting") {
    CHECK(validate(table({{0.0, 1.0, tok("a"), 0.0}, {1.0, 1.0, tok("a"), 1.0}})).clean());
    const auto odd = validate(table({{0.0, 1.0, tok("a"), 2.0}}));
    CHECK(odd.non_binary_target == 1);
    const std::vector<PlausibilityRule> rules{{"x", 0.0, 120.0}};
    const auto flagged = validate(table({{0.0, 65526.0, tok("a"), 0.0}, {1.0, 40.0, tok("a"), 1.0}}), rules);
    REQUIRE(flagged.implausible.size() == 1);
    CHECK(flagged.implausible[0].row == 0);
  }

  TEST_CASE("assembly") {
    const auto t = table({{7.0, 1.0, tok("a"), 0.0}, {8.0, 2.0, tok("b"), 1.0}, {9.0, 3.0, tok("a"), 0.0}});
    const std::vector<std::string> cols{"c"};
    const auto m = assemble(apply_encoder(t, fit_encoder(t, cols)));
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
    CHECK(m.feature_names == std::vector<std::string>{"x", "c_index"});
    CHECK(m.labels.size() == 3);
    CHECK_THROWS_AS(assemble(t), AssemblyError);
    CHECK_THROWS_AS(assemble(table({{0.0, Missing{}, tok("a"), 0.0}})), AssemblyError);

    const auto heart = synthesize(DiseaseId::heart, {50, 1, 1.0, 0.5, 0.0});
    const std::vector<std::string> thal{"thal"};
    const auto hm = assemble(apply_encoder(heart, fit_encoder(heart, thal)));
    CHECK(hm.feature_names == std::vector<std::string>{"age", "sex", "cp", "trestbps", "chol", "thalach", "oldpeak",
                                                       "slope", "ca", "thal_index"});
  }

  TEST_CASE("stratified split") {
    const std::vector<int> labels{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    const auto s = split_indices(labels, {0.8, true, 5});
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);
    int test_pos = 0;
    for (const auto i : s.test) test_pos += labels[i];
    CHECK(test_pos == 1);
    const auto again = split_indices(labels, {0.8, true, 5});
    CHECK(again.train == s.train);

    std::vector<int> thyroid(2718, 0);
    for (int i = 0; i < 268; ++i) thyroid[static_cast<std::size_t>(i) * 10] = 1;
    const auto ts = split_indices(thyroid, {0.7, true, 9});
    int pos = 0;
    for (const auto i : ts.test) pos += thyroid[i];
    CHECK((pos == 80 || pos == 81));

    CHECK_THROWS_AS(split_indices(std::vector<int>{1, 0, 0, 0}, {0.5, true, 1}), SplitError);
  }
}
