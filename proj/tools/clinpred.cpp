#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clinpred/errors.hpp"
#include "clinpred/pipeline.hpp"

namespace fs = std::filesystem;
using namespace clinpred;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;
constexpr int kGoldenFailure = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Timestamps live only here, never in the deterministic outputs.
class RunLog {
 public:
  explicit RunLog(const fs::path& path) : out_(path, std::ios::app) {}
  void line(const std::string& msg) {
    if (out_) out_ << timestamp() << ' ' << msg << '\n';
  }

 private:
  std::ofstream out_;
};

struct TrainArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool repro = false;
};

int cmd_train(const TrainArgs& a) {
  if (a.config.empty() == a.preset.empty()) throw ConfigError("train: give exactly one of --config or --preset");
  PipelineConfig cfg = a.config.empty() ? preset_config(parse_disease(a.preset)) : load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;
  if (a.repro) cfg.repro = true;
  if (!a.out.empty()) {
    cfg.out = a.out;
  } else if (cfg.out.empty()) {
    const char* env = std::getenv("CLINPRED_OUT");
    cfg.out = env && *env ? fs::path(env) : fs::path("clinpred-out");
  }

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw IoError("cannot create '" + cfg.out.string() + "': " + ec.message());
  RunLog log(cfg.out / "run.log");
  log.line("train start experiment=" + cfg.experiment + " seed=" + std::to_string(cfg.seed) +
           " workers=" + std::to_string(cfg.workers));
  const auto start = std::chrono::steady_clock::now();
  const RunResult run = run_experiment(cfg);
  write_outputs(run, cfg.out);
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log.line("train done in " + std::to_string(secs) + "s, outputs in " + cfg.out.string());

  std::cout << render_comparison(run.report);
  if (cfg.repro) std::cout << "\n" << repro_report(cfg.disease, run.report);
  std::cerr << "outputs written to " << cfg.out.string() << "\n";
  return kOk;
}

int cmd_predict(const std::string& bundle_path, const std::string& input, const std::string& out, unsigned workers) {
  const PipelineBundle bundle = load_bundle(read_file(bundle_path));
  std::vector<std::string> warnings;
  Table table;
  if (input == "-") {
    table = read_prediction_input(bundle, std::cin, &warnings);
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open '" + input + "'");
    table = read_prediction_input(bundle, in, &warnings);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const Prediction p = predict_table(bundle, table, Execution{workers});
  std::cerr << "scored " << p.scores.size() << " rows with " << bundle.model_name << ", threshold "
            << fixed_decimals(bundle.threshold.threshold, 4) << "\n";
  std::cerr << "unseen categories: " << p.encode.unseen << "\n";
  for (const auto& [column, n] : p.encode.unseen_by_column) {
    if (n > 0) std::cerr << "  " << column << ": " << n << "\n";
  }
  write_text(out, prediction_csv(p));
  return kOk;
}

int cmd_report(const std::string& results, const std::string& format, const std::string& svg,
               const std::string& repro) {
  const StoredResults stored = parse_results_json(read_file(results));
  std::cout << render_comparison(stored.report, parse_report_format(format));
  if (!svg.empty()) write_roc_svg(stored.curves, svg);
  if (!repro.empty()) std::cout << "\n" << repro_report(parse_disease(repro), stored.report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular disease classification toolkit"};
  app.require_subcommand(1);
  int status = kOk;

  auto* schema = app.add_subcommand("schema", "Print the built-in schema for a disease");
  std::string schema_disease;
  schema->add_option("disease", schema_disease, "heart, thyroid, diabetes or ckd")->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic CSV for a disease");
  std::string synth_disease, synth_out = "-";
  SynthSpec spec;
  bool rate_set = false;
  synth->add_option("disease", synth_disease)->required();
  synth->add_option("-n,--rows", spec.n_rows, "Number of data rows")->required();
  synth->add_option("--seed", spec.seed);
  synth->add_option("--signal", spec.signal_strength, "Class separation in [0, 1]");
  auto* rate = synth->add_option("--positive-rate", spec.positive_rate);
  synth->add_option("--missing-rate", spec.missing_rate);
  synth->add_option("-o,--out", synth_out, "Output file, '-' for stdout");

  auto* train = app.add_subcommand("train", "Run an experiment and write its outputs");
  TrainArgs targs;
  train->add_option("-c,--config", targs.config, "Experiment config file");
  train->add_option("--preset", targs.preset, "Built-in experiment for a disease");
  train->add_option("--out", targs.out, "Output directory (default: config, then $CLINPRED_OUT)");
  train->add_option("--seed", targs.seed, "Master seed");
  train->add_option("--workers", targs.workers, "Worker threads")->check(CLI::PositiveNumber);
  train->add_flag("--repro", targs.repro, "Compare against the published metrics");

  auto* predict = app.add_subcommand("predict", "Score new rows with a trained bundle");
  std::string bundle_path, input_path, predict_out = "-";
  unsigned predict_workers = 1;
  predict->add_option("-b,--bundle", bundle_path)->required();
  predict->add_option("-i,--input", input_path, "CSV file, '-' for stdin")->required();
  predict->add_option("-o,--out", predict_out, "Output file, '-' for stdout");
  predict->add_option("--workers", predict_workers)->check(CLI::PositiveNumber);

  auto* goldens = app.add_subcommand("goldens", "Check metric arithmetic against published confusion matrices");
  bool perturb = false;
  goldens->add_flag("--perturb", perturb, "Shift every fixture's counts; the suite must fail");

  auto* report = app.add_subcommand("report", "Re-render a stored results.json");
  std::string results_path, format = "text", svg_path, repro_disease;
  report->add_option("results", results_path)->required();
  report->add_option("--format", format, "text or csv");
  report->add_option("--svg", svg_path, "Also write the ROC plot");
  report->add_option("--repro", repro_disease, "Compare against the published metrics for a disease");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }
  rate_set = rate->count() > 0;

  try {
    if (*schema) {
      std::cout << format_schema(builtin_schema(parse_disease(schema_disease)));
    } else if (*synth) {
      const auto id = parse_disease(synth_disease);
      if (spec.n_rows == 0) throw ConfigError("synth: --rows must be at least 1");
      if (!rate_set) spec.positive_rate = default_positive_rate(id);
      write_text(synth_out, to_csv(synthesize(id, spec)));
    } else if (*train) {
      status = cmd_train(targs);
    } else if (*predict) {
      status = cmd_predict(bundle_path, input_path, predict_out, predict_workers);
    } else if (*goldens) {
      const auto outcomes = run_goldens(perturb);
      std::cout << format_goldens(outcomes);
      status = goldens_pass(outcomes) ? kOk : kGoldenFailure;
    } else if (*report) {
      status = cmd_report(results_path, format, svg_path, repro_disease);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return status;
}
