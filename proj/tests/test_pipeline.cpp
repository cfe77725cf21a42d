#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "clinpred/errors.hpp"
#include "clinpred/pipeline.hpp"
#include "clinpred/rng.hpp"
#include "doctest.h"

using namespace clinpred;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_heart(double signal = 1.0) {
  auto c = preset_config(DiseaseId::heart);
  c.data.synth.n_rows = 600;
  c.data.synth.signal_strength = signal;
  c.seed = 3;
  return c;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("presets are valid") {
    for (const auto id : kAllDiseases) {
      const auto c = preset_config(id);
      CHECK_NOTHROW(c.check());
      CHECK(c.models.size() == 6);
      CHECK(c.disease == id);
    }
    CHECK(preset_config(DiseaseId::thyroid).split.train_fraction == 0.7);
    CHECK(preset_config(DiseaseId::diabetes).preprocess.dedupe);
    CHECK(preset_config(DiseaseId::ckd).preprocess.drop_null_columns);
  }

  TEST_CASE("config parsing") {
    const auto c = parse_config(
        "# comment\n"
        "preset = thyroid\n"
        "seed = 11\n"
        "threshold = fixed:0.4\n"
        "data.synth.rows = 300\n"
        "preprocess.impute.TSH = zero\n"
        "model.gbt.n_trees = 7\n"
        "model.small.kind = rf\n"
        "model.small.n_trees = 3\n");
    CHECK(c.disease == DiseaseId::thyroid);
    CHECK(c.seed == 11);
    CHECK(c.threshold == ThresholdCriterion{ThresholdRule::fixed, 0.4});
    CHECK(c.data.synth.n_rows == 300);
    CHECK(c.preprocess.overrides.rule_for("TSH") == ImputeRule::zero);
    REQUIRE(c.models.size() == 2);
    CHECK(std::get<GbtHyper>(c.models[0].hp).n_trees == 7);
    CHECK(c.models[0].label() == "GBT");
    CHECK(std::get<ForestHyper>(c.models[1].hp).n_trees == 3);
    CHECK(c.models[1].label() == "small");
  }

  TEST_CASE("config errors name the field") {
    CHECK_THROWS_AS(parse_config("seed = 1\n"), ConfigError);
    CHECK(message_of([] { parse_config("preset = heart\nmodel.lr.learning_rate = -1\n"); }).find("learning_rate") !=
          std::string::npos);
    CHECK(message_of([] { parse_config("preset = heart\nbogus = 1\n"); }).find("bogus") != std::string::npos);
    CHECK_THROWS_AS(parse_config("preset = heart\nno equals sign\n"), ParseError);
    CHECK(message_of([] { parse_config("preset = heart\nmodel.x.max_depth = 2\n"); }).find("model.x.kind") !=
          std::string::npos);

    auto cfg = parse_config("preset = heart\ndata.synth.rows = 200\npreprocess.impute.age = mode\n");
    const auto msg = message_of([&] { run_experiment(cfg); });
    CHECK(msg.find("age") != std::string::npos);
    CHECK(msg.find("mode") != std::string::npos);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  }

  TEST_CASE("strong and null signal") {
    auto strong = preset_config(DiseaseId::heart);
    strong.data.synth.n_rows = 5000;
    const auto run = run_experiment(strong);
    REQUIRE(run.report.rows.size() == 6);
    for (const auto& row : run.report.rows) {
      CAPTURE(row.model);
      CHECK(*row.metrics.auc > 0.9);
    }
    strong.data.synth.signal_strength = 0.0;
    for (const auto& row : run_experiment(strong).report.rows) {
      CAPTURE(row.model);
      CHECK(*row.metrics.auc >= 0.4);
      CHECK(*row.metrics.auc <= 0.6);
    }
  }

  TEST_CASE("every preset runs on synthetic data") {
    for (const auto id : kAllDiseases) {
      auto c = preset_config(id);
      c.data.synth.n_rows = 400;
      c.data.synth.missing_rate = 0.05;
      CAPTURE(to_string(id));
      const auto run = run_experiment(c);
      CHECK(run.report.rows.size() == 6);
      CHECK(run.train.rows() + run.test.rows() > 0);
    }
  }

  TEST_CASE("bundle round trip and production replay") {
    auto cfg = small_heart();
    cfg.data.synth.missing_rate = 0.05;
    cfg.preprocess.numeric = ImputeRule::mean;
    const auto run = run_experiment(cfg);
    SynthSpec spec = cfg.data.synth;
    spec.seed = derive_seed(cfg.seed, "data.synth");
    const auto raw = synthesize(DiseaseId::heart, spec);
    const std::string csv = to_csv(raw);

    for (const auto& m : run.models) {
      CAPTURE(m.config.name);
      const auto bytes = save_bundle(m.bundle);
      const auto back = load_bundle(bytes);
      CHECK(back == m.bundle);
      CHECK(save_bundle(back) == bytes);

      std::istringstream in(csv);
      const auto table = read_prediction_input(back, in);
      const auto p = predict_table(back, table);
      CHECK(p.scores.size() == raw.row_count());
      // Training-time scores for the test partition are recomputed from the assembled matrix.
      const auto direct = predict_probabilities(m.bundle.model, run.test.features);
      const auto replay = predict_probabilities(back.model, run.test.features);
      CHECK(direct == replay);
      CHECK(direct == m.evaluation.scores);
    }

    auto corrupt = save_bundle(run.models[0].bundle);
    corrupt[corrupt.size() / 2] ^= 1;
    CHECK_THROWS_AS(load_bundle(corrupt), ChecksumError);
    CHECK_THROWS_AS(load_bundle(save_model(run.models[0].bundle.model)), ArtifactFormatError);
  }

  TEST_CASE("production input edge cases") {
    const auto run = run_experiment(small_heart());
    const auto& bundle = run.models[0].bundle;

    std::istringstream unseen(
        "age,sex,cp,trestbps,chol,thalach,oldpeak,slope,ca,thal\n"
        "60,1,2,130,250,150,1.0,1,0,never-seen\n"
        "50,,,,,,,,,\n");
    const auto t = read_prediction_input(bundle, unseen);
    const auto p = predict_table(bundle, t);
    CHECK(p.scores.size() == 2);
    CHECK(p.encode.unseen == 1);
    CHECK(prediction_csv(p).rfind("row,score,predicted\n0,", 0) == 0);

    std::istringstream missing_col("age,sex,cp,trestbps,thalach,oldpeak,slope,ca,thal\n60,1,2,130,150,1.0,1,0,2\n");
    CHECK_THROWS_AS(read_prediction_input(bundle, missing_col), SchemaError);
  }

  TEST_CASE("outputs and stored results") {
    const auto run = run_experiment(small_heart());
    const auto dir = fs::temp_directory_path() / "clinpred-outputs-test";
    fs::remove_all(dir);
    write_outputs(run, dir);
    for (const char* f : {"report.txt", "report.csv", "results.json", "roc.svg", "validation.txt", "notes.txt",
                          "models/gbt/bundle.clinpred", "models/gbt/roc.csv", "models/nb/confusion.txt"}) {
      CHECK(fs::exists(dir / f));
    }
    std::ifstream in(dir / "results.json");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto stored = parse_results_json(ss.str());
    CHECK(stored.report == run.report);
    CHECK(stored.curves.size() == 6);
    CHECK(stored.curves[0].curve == run.models[0].evaluation.roc);
    CHECK(render_comparison(stored.report) == render_comparison(run.report));
    fs::remove_all(dir);

    const auto repro = repro_report(DiseaseId::heart, run.report);
    CHECK(repro.find("GBT | 0.9900 /") != std::string::npos);
  }

  TEST_CASE("golden fixtures") {
    const auto outcomes = run_goldens();
    CHECK(goldens_pass(outcomes));
    const auto text = format_goldens(outcomes);
    CHECK(text.find("PASS thyroid-lr") != std::string::npos);
    CHECK(text.find("PASS ckd-nb") != std::string::npos);
    const auto broken = run_goldens(true);
    CHECK_FALSE(goldens_pass(broken));
    CHECK(format_goldens(broken).find("FAIL thyroid-lr") != std::string::npos);
    CHECK(format_goldens(broken).find("diff") != std::string::npos);
  }
}
