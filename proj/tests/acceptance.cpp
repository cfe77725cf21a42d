// Standalone acceptance runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "clinpred/artifact.hpp"
#include "clinpred/errors.hpp"
#include "clinpred/evaluation.hpp"
#include "clinpred/models.hpp"
#include "clinpred/pipeline.hpp"
#include "clinpred/preprocess.hpp"
#include "clinpred/rng.hpp"

using namespace clinpred;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

LabeledMatrix random_data(SplitMix64& rng, std::size_t n, std::size_t d, int levels = 0) {
  LabeledMatrix m;
  m.features = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m.features(i, j) = levels > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)))
                                    : rng.uniform(-2.0, 2.0);
    }
  }
  for (std::size_t i = 0; i < n; ++i) m.labels.push_back(static_cast<int>(rng.below(2)));
  m.labels[0] = 0;
  if (n > 1) m.labels[1] = 1;
  for (std::size_t j = 0; j < d; ++j) m.feature_names.push_back("x" + std::to_string(j));
  return m;
}

double pair_count_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double rel_error(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-6}); }

double oracle_log_loss(const std::vector<double>& z, std::span<const int> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-z[i]));
    s -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return s / static_cast<double>(z.size());
}

// ---------------------------------------------------------------------------

Outcome check_goldens() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto outcomes = run_goldens(false);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!goldens_pass(outcomes)) o.fail("a gating fixture failed");
  if (goldens_pass(run_goldens(true))) o.fail("perturbed fixtures still pass");
  if (secs >= 1.0) o.fail("took " + std::to_string(secs) + " s");

  // Hand-derived values for the CKD naive Bayes and heart LR counts.
  const auto nb = metrics_from_counts({6078, 2657, 1111, 6938});
  if (std::fabs(*nb.precision - 6078.0 / 8735.0) > 1e-15 || std::fabs(*nb.precision - 0.6958) > 5e-5) {
    o.fail("ckd nb precision");
  }
  if (std::fabs(*nb.recall - 0.8455) > 5e-5) o.fail("ckd nb recall");
  if (std::fabs(*nb.accuracy - 0.7755) > 5e-5) o.fail("ckd nb accuracy");
  const auto heart = metrics_from_counts({112, 16, 15, 59});
  if (std::fabs(*heart.accuracy - 0.8465) > 5e-5) o.fail("heart lr accuracy");
  std::size_t checks = 0;
  for (const auto& g : outcomes) checks += g.checks.size();
  if (o.pass) o.detail = std::to_string(outcomes.size()) + " fixtures, " + std::to_string(checks) + " checks";
  return o;
}

Outcome check_auc_oracle() {
  Outcome o;
  SplitMix64 rng(0xA0C);
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto n = static_cast<std::size_t>(2 + rng.below(499));
    const auto levels = 2 + rng.below(inst % 2 == 0 ? 10 : 1000);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    const double got = auc(s, y);
    const double want = pair_count_auc(s, y);
    worst = std::max(worst, std::fabs(got - want));
  }
  if (worst > 1e-12) o.fail("max |diff| = " + std::to_string(worst));
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |diff| = %.3g", worst);
    o.detail = buf;
  }
  return o;
}

Outcome check_gradients() {
  Outcome o;
  constexpr double eps = 1e-5;
  SplitMix64 rng(0x6AD);
  double worst_lr = 0.0;
  double worst_nn = 0.0;

  for (int inst = 0; inst < 20; ++inst) {
    const auto n = static_cast<std::size_t>(3 + rng.below(20));
    const auto d = static_cast<std::size_t>(1 + rng.below(5));
    const auto data = random_data(rng, n, d);
    std::vector<double> w(d);
    for (auto& v : w) v = rng.uniform(-1.5, 1.5);
    const double b = rng.uniform(-1.0, 1.0);
    const double l2 = inst % 3 == 0 ? 0.0 : rng.uniform(0.0, 0.5);

    const auto loss_at = [&](const std::vector<double>& ww, double bb) {
      std::vector<double> z(n, bb);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) z[i] += ww[j] * data.features(i, j);
      }
      double pen = 0.0;
      for (const double v : ww) pen += v * v;
      return oracle_log_loss(z, data.labels) + 0.5 * l2 * pen;
    };
    const auto g = logistic_loss_gradient(data.features, data.labels, w, b, l2);
    if (rel_error(g.loss, loss_at(w, b)) > 1e-10) o.fail("lr loss value disagrees with oracle");
    for (std::size_t j = 0; j < d; ++j) {
      auto hi = w, lo = w;
      hi[j] += eps;
      lo[j] -= eps;
      worst_lr = std::max(worst_lr, rel_error(g.weights[j], (loss_at(hi, b) - loss_at(lo, b)) / (2 * eps)));
    }
    worst_lr = std::max(worst_lr, rel_error(g.bias, (loss_at(w, b + eps) - loss_at(w, b - eps)) / (2 * eps)));
  }

  for (int inst = 0; inst < 20; ++inst) {
    const auto n = static_cast<std::size_t>(3 + rng.below(15));
    const auto d = static_cast<std::size_t>(1 + rng.below(4));
    const auto h = static_cast<std::size_t>(1 + rng.below(5));
    const auto data = random_data(rng, n, d);
    MlpModel m;
    m.hp.l2 = inst % 3 == 0 ? 0.0 : rng.uniform(0.0, 0.3);
    m.inputs = d;
    m.hidden = h;
    m.w1.resize(d * h);
    m.b1.resize(h);
    m.w2.resize(h);
    for (auto& v : m.w1) v = rng.uniform(-1.0, 1.0);
    for (auto& v : m.b1) v = rng.uniform(-0.5, 0.5);
    for (auto& v : m.w2) v = rng.uniform(-1.0, 1.0);
    m.b2 = rng.uniform(-0.5, 0.5);

    const auto loss_at = [&](const MlpModel& mm) {
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) {
        double out = mm.b2;
        for (std::size_t k = 0; k < h; ++k) {
          double a = mm.b1[k];
          for (std::size_t j = 0; j < d; ++j) a += data.features(i, j) * mm.w1[j * h + k];
          out += std::max(a, 0.0) * mm.w2[k];
        }
        z[i] = out;
      }
      double pen = 0.0;
      for (const double v : mm.w1) pen += v * v;
      for (const double v : mm.w2) pen += v * v;
      return oracle_log_loss(z, data.labels) + 0.5 * mm.hp.l2 * pen;
    };
    const auto g = mlp_loss_gradient(m, data.features, data.labels);
    if (rel_error(g.loss, loss_at(m)) > 1e-10) o.fail("nn loss value disagrees with oracle");

    const auto probe = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + eps;
      const double up = loss_at(m);
      param = saved - eps;
      const double down = loss_at(m);
      param = saved;
      worst_nn = std::max(worst_nn, rel_error(analytic, (up - down) / (2 * eps)));
    };
    for (std::size_t k = 0; k < m.w1.size(); ++k) probe(m.w1[k], g.w1[k]);
    for (std::size_t k = 0; k < h; ++k) probe(m.b1[k], g.b1[k]);
    for (std::size_t k = 0; k < h; ++k) probe(m.w2[k], g.w2[k]);
    probe(m.b2, g.b2);
  }

  if (worst_lr >= 1e-4) o.fail("lr max relative error " + std::to_string(worst_lr));
  if (worst_nn >= 1e-4) o.fail("nn max relative error " + std::to_string(worst_nn));
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max relative error lr %.2g, nn %.2g", worst_lr, worst_nn);
    o.detail = buf;
  }
  return o;
}

Outcome check_cart_root() {
  Outcome o;
  SplitMix64 rng(0xCA27);
  const auto impurity = [](double pos, double n) {
    if (n == 0) return 0.0;
    const double p = pos / n;
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  };
  int split_instances = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const auto n = static_cast<std::size_t>(2 + rng.below(29));
    const auto d = static_cast<std::size_t>(1 + rng.below(3));
    const auto data = random_data(rng, n, d, inst % 2 == 0 ? 4 : 0);

    double total_pos = 0;
    for (const int y : data.labels) total_pos += y;
    const double parent = impurity(total_pos, static_cast<double>(n));
    double best = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
      std::set<double> values;
      for (std::size_t i = 0; i < n; ++i) values.insert(data.features(i, j));
      for (const double t : values) {
        double ln = 0, lp = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (data.features(i, j) <= t) {
            ln += 1;
            lp += data.labels[i];
          }
        }
        const double rn = static_cast<double>(n) - ln;
        if (ln == 0 || rn == 0) continue;
        const double gain =
            parent - (ln * impurity(lp, ln) + rn * impurity(total_pos - lp, rn)) / static_cast<double>(n);
        best = std::max(best, gain);
      }
    }

    TreeHyper hp;
    hp.max_depth = 3;
    hp.min_samples_leaf = 1;
    const auto model = train_tree(data, hp);
    const auto& tree = model.as<TreeModel>().tree;
    const auto& root = tree.nodes.front();
    const bool pure = total_pos == 0 || total_pos == static_cast<double>(n);
    if (root.is_leaf()) {
      if (!pure && best >= 0.0) o.fail("instance " + std::to_string(inst) + ": root is a leaf but a split exists");
      continue;
    }
    ++split_instances;
    double ln = 0, lp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (data.features(i, static_cast<std::size_t>(root.feature)) <= root.threshold) {
        ln += 1;
        lp += data.labels[i];
      }
    }
    const double rn = static_cast<double>(n) - ln;
    const double got = parent - (ln * impurity(lp, ln) + rn * impurity(total_pos - lp, rn)) / static_cast<double>(n);
    if (got < best - 1e-12) {
      o.fail("instance " + std::to_string(inst) + ": root gain " + std::to_string(got) + " < best " +
             std::to_string(best));
    }
  }
  if (o.pass) o.detail = std::to_string(split_instances) + " of 100 instances split at the root";
  return o;
}

Outcome check_gbt_descent() {
  Outcome o;
  SplitMix64 rng(0x6B7);
  double worst_rise = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const auto n = static_cast<std::size_t>(20 + rng.below(80));
    const auto d = static_cast<std::size_t>(1 + rng.below(4));
    const auto data = random_data(rng, n, d);
    GbtHyper hp;
    hp.n_trees = 20;
    hp.learning_rate = rng.uniform(0.05, 0.5);
    hp.max_depth = static_cast<int>(1 + rng.below(3));
    const auto full = train_gbt(data, hp).as<GbtModel>();
    if (full.train_loss.size() != 21) o.fail("expected 21 recorded losses");
    double prev = INFINITY;
    for (std::size_t k = 0; k <= full.trees.size(); ++k) {
      GbtModel part = full;
      part.trees.resize(k);
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = part.margin(data.features.row(i));
      const double loss = oracle_log_loss(z, data.labels);
      if (k < full.train_loss.size() && std::fabs(loss - full.train_loss[k]) > 1e-9) {
        o.fail("recorded loss disagrees with recomputed loss");
      }
      worst_rise = std::max(worst_rise, loss - prev);
      if (loss > prev + 1e-12) o.fail("loss rose by " + std::to_string(loss - prev) + " at round " + std::to_string(k));
      prev = loss;
    }
  }
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "largest rise %.3g", worst_rise);
    o.detail = buf;
  }
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).generic_string()] = ss.str();
  }
  return files;
}

Outcome check_determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / ("clinpred-acceptance-" + std::to_string(::getpid()));
  std::vector<std::map<std::string, std::string>> runs;
  for (const unsigned workers : {1u, 1u, 4u}) {
    auto cfg = preset_config(DiseaseId::heart);
    cfg.data.synth.n_rows = 1500;
    cfg.data.synth.missing_rate = 0.05;
    cfg.preprocess.numeric = ImputeRule::mean;
    cfg.seed = 2024;
    cfg.workers = workers;
    const auto dir = root / std::to_string(runs.size());
    write_outputs(run_experiment(cfg), dir);
    runs.push_back(snapshot(dir));
  }
  fs::remove_all(root);
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].size() != runs[0].size()) o.fail("different file sets");
    for (const auto& [name, bytes] : runs[0]) {
      const auto it = runs[r].find(name);
      if (it == runs[r].end() || it->second != bytes) o.fail(name + " differs in run " + std::to_string(r));
    }
  }
  if (o.pass) o.detail = std::to_string(runs[0].size()) + " files identical across 3 runs (workers 1, 1, 4)";
  return o;
}

Outcome check_signal_recovery() {
  Outcome o;
  std::string detail;
  for (const double signal : {1.0, 0.0}) {
    auto cfg = preset_config(DiseaseId::heart);
    cfg.data.synth.n_rows = 5000;
    cfg.data.synth.signal_strength = signal;
    cfg.seed = 7;
    const auto run = run_experiment(cfg);
    detail += signal == 1.0 ? "signal 1:" : "; signal 0:";
    for (const auto& row : run.report.rows) {
      const double a = row.metrics.auc.value_or(-1.0);
      detail += " " + row.model + "=" + fixed_decimals(a, 3);
      if (signal == 1.0) {
        if ((row.model == "RF" || row.model == "GBT") && a < 0.95) o.fail(row.model + " AUC " + std::to_string(a));
        if (row.model == "LR" && a < 0.85) o.fail("LR AUC " + std::to_string(a));
      } else if (a < 0.40 || a > 0.60) {
        o.fail(row.model + " null-signal AUC " + std::to_string(a));
      }
    }
  }
  if (o.pass) o.detail = detail;
  return o;
}

Table random_table(SplitMix64& rng, std::size_t n) {
  Schema schema{{"id", ColumnKind::numeric, ColumnRole::identifier, ""},
                {"a", ColumnKind::numeric, ColumnRole::feature, ""},
                {"b", ColumnKind::numeric, ColumnRole::feature, ""},
                {"c", ColumnKind::categorical, ColumnRole::feature, ""},
                {"y", ColumnKind::numeric, ColumnRole::target, ""}};
  std::vector<Row> rows;
  const char* tokens[] = {"p", "q", "r", "s"};
  for (std::size_t i = 0; i < n; ++i) {
    Row r;
    r.push_back(static_cast<double>(rng.below(n / 2 + 1)));
    for (int k = 0; k < 2; ++k) {
      if (rng.uniform() < 0.2) {
        r.push_back(Missing{});
      } else {
        r.push_back(static_cast<double>(rng.below(4)));
      }
    }
    if (rng.uniform() < 0.2) {
      r.push_back(Missing{});
    } else {
      r.push_back(std::string(tokens[rng.below(4)]));
    }
    r.push_back(static_cast<double>(rng.below(2)));
    rows.push_back(std::move(r));
  }
  return Table(std::move(schema), std::move(rows));
}

Outcome check_preprocessing() {
  Outcome o;
  SplitMix64 rng(0x9E9);
  for (int inst = 0; inst < 50; ++inst) {
    const auto t = random_table(rng, 10 + rng.below(200));

    ImputePolicy policy;
    policy.set("a", inst % 2 ? ImputeRule::mean : ImputeRule::zero);
    policy.set("b", ImputeRule::mean);
    policy.set("c", ImputeRule::mode);
    const auto filled = apply_imputer(t, fit_imputer(t, policy));
    if (filled.missing_count() != 0) o.fail("imputation left missing cells");

    const auto once = dedupe(t);
    if (dedupe(once) != once) o.fail("dedupe is not idempotent");
    std::set<Row> seen(t.rows().begin(), t.rows().end());
    if (once.row_count() != seen.size()) o.fail("dedupe kept duplicate rows");

    std::vector<int> labels(t.row_count());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(std::get<double>(t.at(i, 4)));
    SplitSpec spec{rng.uniform(0.1, 0.9), true, rng.next()};
    const auto parts = split_indices(labels, spec);
    std::vector<std::size_t> all = parts.train;
    all.insert(all.end(), parts.test.begin(), parts.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(labels.size());
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    if (all != expect) o.fail("split is not an exact partition");
    for (const int cls : {0, 1}) {
      double total = 0, in_train = 0;
      for (std::size_t i = 0; i < labels.size(); ++i) total += labels[i] == cls;
      for (const auto i : parts.train) in_train += labels[i] == cls;
      if (std::fabs(in_train - spec.train_fraction * total) > 1.0) o.fail("stratification off by more than one row");
    }

    // Encoder ordering on a random vocabulary.
    const auto vocab = 1 + rng.below(12);
    std::vector<Row> rows;
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0, n = 20 + rng.below(200); i < n; ++i) {
      std::string tok = "t" + std::to_string(rng.below(vocab) * 7 % 13);
      if (rng.uniform() < 0.5) tok = "t" + std::to_string(rng.below(2));
      ++counts[tok];
      rows.push_back({tok, 0.0});
    }
    const Table vt({{"v", ColumnKind::categorical, ColumnRole::feature, ""},
                    {"y", ColumnKind::numeric, ColumnRole::target, ""}},
                   std::move(rows));
    const std::vector<std::string> cols{"v"};
    const auto enc = fit_encoder(vt, cols);
    std::vector<std::pair<std::string, std::size_t>> order(counts.begin(), counts.end());
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    std::vector<std::string> want;
    for (const auto& p : order) want.push_back(p.first);
    if (enc.columns.size() != 1 || enc.columns[0].tokens != want) o.fail("encoder order differs from oracle");
  }
  if (o.pass) o.detail = "50 random tables";
  return o;
}

template <typename E>
bool throws(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

std::string with_checksum(std::string body) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  return body + "checksum " + buf + "\n";
}

std::string body_of(const std::string& artifact) {
  const auto pos = artifact.rfind("checksum ");
  return artifact.substr(0, pos);
}

Outcome check_persistence() {
  Outcome o;
  SplitMix64 rng(0x5A7E);
  auto data = random_data(rng, 200, 4);
  for (std::size_t i = 0; i < data.rows(); ++i) data.features(i, 3) = static_cast<double>(rng.below(3));
  const auto probe = random_data(rng, 100, 4);

  std::vector<Hyperparams> kinds{LrHyper{}, TreeHyper{}, ForestHyper{}, GbtHyper{}, NbHyper{}, MlpHyper{}};
  std::get<ForestHyper>(kinds[2]).n_trees = 15;
  std::get<GbtHyper>(kinds[3]).n_trees = 15;
  std::get<NbHyper>(kinds[4]).categorical_columns = {3};
  std::get<MlpHyper>(kinds[5]).epochs = 5;
  std::size_t mutations = 0;
  for (const auto& hp : kinds) {
    const auto model = train_model(data, hp);
    const auto bytes = save_model(model);
    const auto name = std::string(to_string(kind_of(hp)));
    const auto loaded = load_model(bytes);
    if (!(loaded == model)) o.fail(name + ": reloaded parameters differ");
    const auto a = predict_scores(model, probe.features);
    const auto b = predict_scores(loaded, probe.features);
    if (std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0) o.fail(name + ": scores not bit-identical");
    if (save_model(loaded) != bytes) o.fail(name + ": re-save differs");

    if (!throws<TruncatedArtifactError>([&] { load_model(bytes.substr(0, bytes.size() / 2)); })) {
      o.fail(name + ": truncation not detected");
    }
    auto flipped = bytes;
    flipped[bytes.size() / 3] ^= 0x01;
    if (!throws<ChecksumError>([&] { load_model(flipped); })) o.fail(name + ": bit flip not detected");
    auto body = body_of(bytes);
    const auto newer = with_checksum("clinpred-artifact 99" + body.substr(body.find('\n')));
    if (!throws<VersionError>([&] { load_model(newer); })) o.fail(name + ": version not checked");
    const auto junk = with_checksum(body + "unexpected 1 2 3\n");
    if (!throws<ArtifactFormatError>([&] { load_model(junk); })) o.fail(name + ": trailing junk accepted");
    const auto cut = with_checksum(body.substr(0, body.rfind('\n', body.size() - 2) + 1));
    if (!throws<ArtifactFormatError>([&] { load_model(cut); })) o.fail(name + ": missing line accepted");

    // Random edits with a recomputed checksum must fail cleanly or load a valid model.
    SplitMix64 mut(derive_seed(0xBAD, name));
    for (int k = 0; k < 300; ++k) {
      auto m = body;
      const auto pos = 20 + mut.below(m.size() - 20);
      const char* alphabet = "0123456789 -.e%xnaif\n";
      m[pos] = alphabet[mut.below(21)];
      ++mutations;
      try {
        const auto l = load_model(with_checksum(m));
        (void)predict_scores(l, probe.features);
      } catch (const ArtifactError&) {
      } catch (const DimensionError&) {
      } catch (const std::exception& e) {
        o.fail(name + ": mutation raised a non-artifact error: " + e.what());
        break;
      }
    }
  }
  if (o.pass) o.detail = "6 kinds, " + std::to_string(mutations) + " corrupted artifacts rejected cleanly";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"golden metric arithmetic", check_goldens},
      {"AUC equals pair-count statistic", check_auc_oracle},
      {"LR and NN gradient checks", check_gradients},
      {"CART root split is Gini-optimal", check_cart_root},
      {"GBT training loss nonincreasing", check_gbt_descent},
      {"determinism and worker invariance", check_determinism},
      {"end-to-end signal recovery", check_signal_recovery},
      {"preprocessing invariants", check_preprocessing},
      {"persistence round-trip and corruption", check_persistence},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %d. %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", index++, c.name, secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
