// Acceptance suite: one PASS / FAIL / SKIP line per criterion.
// Criteria 10-16 need the Framingham CSV named by CHD_DATA.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chd/error.hpp"
#include "chd/eval.hpp"
#include "chd/features.hpp"
#include "chd/format.hpp"
#include "chd/ingest.hpp"
#include "chd/models.hpp"
#include "chd/pipeline.hpp"
#include "chd/preprocess.hpp"
#include "chd/random.hpp"
#include "chd/resample.hpp"

namespace fs = std::filesystem;
using namespace chd;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

Outcome pass(std::string detail) { return {Status::Pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Status::Fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Status::Skip, std::move(detail)}; }

std::string fixed(double v) { return format_fixed(v, 6); }

// ---------------------------------------------------------------------------
// Independent oracles

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) num += 1.0;
      else if (s[i] == s[j]) num += 0.5;
    }
  }
  return num / pairs;
}

double contingency_mi(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px, py;
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[{x[i], y[i]}] += 1.0;
    px[x[i]] += 1.0;
    py[y[i]] += 1.0;
  }
  const double n = double(x.size());
  double mi = 0.0;
  for (const auto& [k, c] : joint) mi += (c / n) * std::log((c * n) / (px[k.first] * py[k.second]));
  return mi;
}

std::vector<bool> oracle_sigma(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double s = std::sqrt(ss / double(v.size() - 1));
  std::vector<bool> out;
  for (double x : v) out.push_back(std::abs(x - mean) > 3.0 * s);
  return out;
}

double oracle_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = double(v.size() - 1) * p;
  const auto lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - double(lo)) * (v[hi] - v[lo]);
}

std::vector<bool> oracle_iqr(const std::vector<double>& v) {
  const double q1 = oracle_quantile(v, 0.25), q3 = oracle_quantile(v, 0.75);
  const double iqr = q3 - q1;
  std::vector<bool> out;
  for (double x : v) out.push_back(x > q3 + 1.5 * iqr || x < q1 - 1.5 * iqr);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFixture = CHD_TEST_DATA_DIR "/fixture60.csv";

// ---------------------------------------------------------------------------
// Always-on criteria

Outcome auc_oracle() {
  Rng rng(1001);
  double worst_area = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.uniform_index(499);
    const std::size_t levels = 2 + rng.uniform_index(n);  // few levels inject ties
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = double(rng.uniform_index(levels)) / double(levels);
      y[i] = rng.uniform01() < 0.3 ? 1 : 0;
    }
    y[0] = 0;
    y[1] = 1;
    const double fast = roc_auc(s, y), slow = brute_auc(s, y);
    if (fast != slow) return fail("instance " + std::to_string(inst) + ": " + format_real(fast) + " vs " + format_real(slow));
    worst_area = std::max(worst_area, std::abs(roc_curve(s, y).area() - slow));
  }
  if (worst_area > 1e-12) return fail("trapezoid area off by " + format_real(worst_area));
  return pass("200 instances exact; max area error " + format_real(worst_area));
}

Outcome lr_gradient() {
  Rng rng(2002);
  Matrix x(20, 5);
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) {
    y[std::size_t(i)] = rng.uniform01() < 0.5 ? 1 : 0;
    for (int j = 0; j < 5; ++j) x(i, j) = rng.uniform01() * 4.0 - 2.0;
  }
  double worst = 0.0;
  for (int point = 0; point < 5; ++point) {
    Vector w(5);
    for (int j = 0; j < 5; ++j) w[j] = rng.uniform01() * 2.0 - 1.0;
    const double b = rng.uniform01() * 2.0 - 1.0, lambda = 1.0, h = 1e-6;
    Vector gw;
    double gb = 0.0;
    logistic::gradient(x, y, w, b, lambda, gw, gb);
    Vector a(6), fd(6);
    a << gw, gb;
    for (int j = 0; j < 6; ++j) {
      Vector wp = w, wm = w;
      double bp = b, bm = b;
      if (j < 5) wp[j] += h, wm[j] -= h;
      else bp += h, bm -= h;
      fd[j] = (logistic::loss(x, y, wp, bp, lambda) - logistic::loss(x, y, wm, bm, lambda)) / (2 * h);
    }
    worst = std::max(worst, (a - fd).norm() / std::max(a.norm(), fd.norm()));
  }
  if (worst >= 1e-5) return fail("relative error " + format_real(worst));
  return pass("max relative error " + format_real(worst));
}

Outcome mi_oracle() {
  double worst = 0.0;
  std::size_t joints = 0;
  // Every pair of code vectors over {0,1,2} x {0,1} up to length 6.
  for (std::size_t n = 1; n <= 6; ++n) {
    std::size_t xs = 1, ys = 1;
    for (std::size_t i = 0; i < n; ++i) xs *= 3, ys *= 2;
    for (std::size_t a = 0; a < xs; ++a) {
      std::vector<int> x(n);
      for (std::size_t i = 0, r = a; i < n; ++i, r /= 3) x[i] = int(r % 3);
      for (std::size_t b = 0; b < ys; ++b) {
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = int((b >> i) & 1u);
        worst = std::max(worst, std::abs(mutual_information(x, y) - contingency_mi(x, y)));
        ++joints;
      }
    }
  }
  if (worst > 1e-12) return fail("contingency mismatch " + format_real(worst));
  double self_worst = 0.0;
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t b = 0; b < (std::size_t(1) << n); ++b) {
      std::vector<int> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = int((b >> i) & 1u);
      double h = 0.0;
      const double ones = double(std::count(x.begin(), x.end(), 1)), zeros = double(n) - ones;
      for (double c : {ones, zeros})
        if (c > 0) h -= (c / double(n)) * std::log(c / double(n));
      self_worst = std::max(self_worst, std::abs(mutual_information(x, x) - h));
    }
  if (self_worst > 1e-12) return fail("MI(x,x) differs from H(x) by " + format_real(self_worst));
  return pass(std::to_string(joints) + " joints, max error " + format_real(std::max(worst, self_worst)));
}

Outcome outlier_oracle() {
  Rng rng(4004);
  for (int col = 0; col < 100; ++col) {
    const std::size_t n = 4 + rng.uniform_index(300);
    std::vector<double> v(n);
    for (double& x : v) {
      x = 50.0 + 20.0 * (rng.uniform01() + rng.uniform01() + rng.uniform01() - 1.5);
      if (rng.uniform01() < 0.03) x += 200.0 * (rng.uniform01() - 0.3);
      if (rng.uniform01() < 0.2) x = std::round(x);
    }
    if (sigma_outlier_mask(v) != oracle_sigma(v)) return fail("sigma mask mismatch on column " + std::to_string(col));
    if (iqr_outlier_mask(v) != oracle_iqr(v)) return fail("IQR mask mismatch on column " + std::to_string(col));
  }
  for (std::size_t n : {4u, 5u, 50u}) {
    const std::vector<double> c(n, 3.7);
    const auto s = sigma_outlier_mask(c), q = iqr_outlier_mask(c);
    if (std::count(s.begin(), s.end(), true) || std::count(q.begin(), q.end(), true))
      return fail("constant column flagged");
  }
  return pass("100 random columns match both oracles; constant columns unflagged");
}

Outcome smote_geometry() {
  Rng rng(5005);
  std::size_t synthetic_total = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n0 = 30 + rng.uniform_index(40), n1 = 3 + rng.uniform_index(12), d = 1 + rng.uniform_index(4);
    Matrix x(static_cast<Eigen::Index>(n0 + n1), static_cast<Eigen::Index>(d));
    std::vector<int> y;
    for (std::size_t i = 0; i < n0 + n1; ++i) {
      y.push_back(i < n0 ? 0 : 1);
      for (std::size_t c = 0; c < d; ++c) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rng.uniform01() * 10;
    }
    if (trial % 2) std::rotate(y.begin(), y.begin() + 5, y.end());
    const Dataset data(x, y, std::vector<std::string>(d, "f"));
    SmoteParams p;
    p.seed = 77 + std::uint64_t(trial);
    const Dataset out = smote(data, p);
    const std::size_t maj = data.count_label(0), minc = data.count_label(1);
    if (out.count_label(0) != maj || out.count_label(1) != maj) return fail("counts do not reach parity");
    if (out.features.topRows(data.features.rows()) != data.features) return fail("original rows changed");
    std::vector<std::size_t> minority;
    for (std::size_t r = 0; r < data.rows(); ++r)
      if (data.labels[r] == 1) minority.push_back(r);
    Matrix mx(static_cast<Eigen::Index>(minority.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < minority.size(); ++i) mx.row(static_cast<Eigen::Index>(i)) = data.features.row(static_cast<Eigen::Index>(minority[i]));
    const auto nn = minority_neighbors(mx, p.k_neighbors);
    for (std::size_t r = data.rows(); r < out.rows(); ++r) {
      const std::size_t base = (r - data.rows()) % minc;
      bool on_segment = false;
      for (std::size_t j : nn[base]) {
        bool ok = true;
        for (std::size_t c = 0; c < d; ++c) {
          const double v = out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
          const double a = mx(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(c)), b = mx(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
          ok = ok && v >= std::min(a, b) && v <= std::max(a, b);
        }
        on_segment = on_segment || ok;
      }
      if (!on_segment || out.labels[r] != 1 || !out.synthetic[r]) return fail("synthetic row off its segment");
      ++synthetic_total;
    }
    const Dataset again = smote(data, p);
    if (again.features.size() != out.features.size() ||
        std::memcmp(again.features.data(), out.features.data(), sizeof(double) * std::size_t(out.features.size())) != 0)
      return fail("same seed produced different bytes");
  }
  return pass(std::to_string(synthetic_total) + " synthetic rows on their base-neighbor segments");
}

Outcome cart_rf() {
  Matrix x(4, 2);
  x << 0, 0, 1, 1, 0, 1, 1, 0;
  const Dataset xr(x, {0, 0, 1, 1}, {"a", "b"});
  const TrainedModel tree = fit(ClassifierSpec(Algorithm::CART), xr);
  const std::size_t depth = std::get<DecisionTree>(tree.parameters()).depth();
  for (std::size_t r = 0; r < 4; ++r)
    if (tree.predict(xr.row(r)).label != xr.labels[r]) return fail("XOR training error");
  if (depth != 2) return fail("XOR tree depth " + std::to_string(depth));

  Rng rng(6006);
  Matrix z(120, 4);
  std::vector<int> y(120);
  for (int i = 0; i < 120; ++i) {
    y[std::size_t(i)] = rng.uniform01() < 0.35 ? 1 : 0;
    for (int j = 0; j < 4; ++j) z(i, j) = rng.uniform01() + 0.4 * y[std::size_t(i)] * (j % 2);
  }
  const Dataset d(z, y, {"a", "b", "c", "e"});
  const TrainedModel cart = fit(ClassifierSpec(Algorithm::CART), d);
  const TrainedModel rf = fit(
      ClassifierSpec(Algorithm::RF, {{"n_trees", 1.0}, {"bootstrap", 0.0}, {"max_features", 4.0}}, 12345), d);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> q(4);
    for (double& v : q) v = rng.uniform01() * 1.4;
    if (cart.score(q) != rf.score(q)) return fail("RF score differs from CART");
  }
  return pass("XOR depth 2, 100% train accuracy; 1-tree RF equals CART on 200 probes");
}

Outcome svm_kkt() {
  Rng rng(7007);
  Matrix x(40, 2);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) {
    y[std::size_t(i)] = i < 20 ? 0 : 1;
    x(i, 0) = rng.uniform01() * 2 - 1 + (i < 20 ? -0.5 : 0.5);
    x(i, 1) = rng.uniform01() * 2 - 1;
  }
  const double c = 1.0;
  const svm::Solution s = svm::solve(x, y, c, svm::scale_gamma(x), 1e-3, 400);
  if (!s.converged) return fail("solver did not converge in " + std::to_string(s.iterations) + " iterations");
  double balance = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    if (s.alpha[i] < 0.0 || s.alpha[i] > c) return fail("alpha outside [0, C]");
    balance += s.alpha[i] * (y[i] ? 1.0 : -1.0);
  }
  if (std::abs(balance) >= 1e-6) return fail("|sum alpha y| = " + format_real(std::abs(balance)));
  return pass("converged in " + std::to_string(s.iterations) + " iterations; |sum alpha y| = " +
              format_real(std::abs(balance)));
}

Dataset fixture_clean() {
  PipelineConfig c = PipelineConfig::defaults();
  c.input_path = kFixture;
  return run_pipeline(c, Stage::Clean).clean;
}

Outcome leakage() {
  const Dataset d = fixture_clean();
  EvalOptions opt;
  opt.folds = 10;
  opt.seed = 3;
  opt.mode = SmoteMode::LeakageFree;
  std::size_t leaked = 0, folds = 0, synthetic_train = 0;
  auto observer = [&](std::size_t, const Dataset& train, const Dataset& test) {
    ++folds;
    leaked += std::size_t(std::count(test.synthetic.begin(), test.synthetic.end(), true));
    synthetic_train += std::size_t(std::count(train.synthetic.begin(), train.synthetic.end(), true));
  };
  for (Algorithm a : kAllAlgorithms) cross_validate(ClassifierSpec(a), d, opt, observer);
  holdout_evaluate(ClassifierSpec(Algorithm::LR), d, opt, observer);
  if (leaked) return fail(std::to_string(leaked) + " synthetic rows held out");
  if (!synthetic_train) return fail("no synthetic rows were generated");
  return pass(std::to_string(folds) + " held-out sets, 0 synthetic rows; " + std::to_string(synthetic_train) +
              " synthetic rows in training");
}

Outcome determinism() {
  PipelineConfig c = PipelineConfig::defaults();
  c.input_path = kFixture;
  const fs::path base = fs::temp_directory_path() / "chd_acceptance_determinism";
  fs::remove_all(base);
  emit_tables(run_pipeline(c), Stage::Run, base / "a");
  emit_tables(run_pipeline(c), Stage::Run, base / "b");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const std::string name = entry.path().filename().string();
    if (name == "timings.json") continue;
    if (slurp(entry.path()) != slurp(base / "b" / name)) return fail(name + " differs between runs");
    ++compared;
  }
  fs::remove_all(base);
  return pass(std::to_string(compared) + " report files byte-identical");
}

// ---------------------------------------------------------------------------
// Gated criteria

struct Gated {
  std::optional<fs::path> path;
  std::optional<RunReport> report;
  double run_seconds = 0.0;
  std::string error;

  const RunReport* full() {
    if (!report && error.empty()) {
      try {
        PipelineConfig c = PipelineConfig::defaults();
        c.input_path = *path;
        const auto start = std::chrono::steady_clock::now();
        report = run_pipeline(c);
        run_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (const std::exception& e) {
        error = e.what();
      }
    }
    return report ? &*report : nullptr;
  }
};

const EvalSummary* find(const std::vector<EvalSummary>& v, Algorithm a) {
  for (const auto& s : v)
    if (s.spec.algorithm() == a) return &s;
  return nullptr;
}

std::vector<Algorithm> ranking(const std::vector<EvalSummary>& v, bool holdout) {
  std::vector<const EvalSummary*> order;
  for (const auto& s : v) order.push_back(&s);
  auto key = [&](const EvalSummary* s) { return holdout ? s->holdout_auc.value_or(0.0) : s->mean; };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) > key(b); });
  std::vector<Algorithm> out;
  for (const auto* s : order) out.push_back(s->spec.algorithm());
  return out;
}

Outcome missing_counts(Gated& g) {
  const CohortTable t = load_csv(*g.path, Schema::framingham());
  const MissingReport r = missing_report(t);
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"education", 185}, {"cigsPerDay", 29}, {"BPMeds", 53},   {"totChol", 50},
      {"BMI", 19},        {"heartRate", 1},   {"glucose", 388}, {"TenYearCHD", 0}};
  std::string got;
  bool ok = true;
  for (const auto& [name, n] : expected) {
    got += name + "=" + std::to_string(r.count(name)) + " ";
    ok = ok && r.count(name) == n;
  }
  std::size_t others = r.total();
  for (const auto& e : expected) others -= std::min(others, r.count(e.first));
  ok = ok && others == 0;
  return ok ? pass(got) : fail(got + "others=" + std::to_string(others));
}

Outcome balance(Gated& g) {
  const ClassBalance b = class_balance(load_csv(*g.path, Schema::framingham()));
  const std::string got = "(" + std::to_string(b.negatives) + ", " + std::to_string(b.positives) + ")";
  return b == ClassBalance{3465, 617} ? pass(got) : fail(got + " expected (3465, 617)");
}

Outcome sigma_totals(Gated& g) {
  PipelineConfig c = PipelineConfig::defaults();
  c.input_path = *g.path;
  const RunReport r = run_pipeline(c, Stage::Clean);
  const std::vector<std::pair<std::string, long>> expected = {{"cigsPerDay", 11}, {"totChol", 54}, {"sysBP", 127},
                                                              {"diaBP", 84},      {"BMI", 96},     {"heartRate", 76},
                                                              {"glucose", 249}};
  const double total = double(r.outliers.total);
  bool ok = std::abs(total - 697.0) <= 0.03 * 697.0;
  std::string got = "total=" + std::to_string(r.outliers.total);
  for (const auto& [name, n] : expected) {
    const long have = long(r.outliers.count(name));
    got += " " + name + "=" + std::to_string(have);
    ok = ok && std::abs(have - n) <= 10;
  }
  got += " (IQR reference total " + std::to_string(r.outliers_iqr_reference.total) + ")";
  return ok ? pass(got) : fail(got);
}

Outcome cv_none(Gated& g) {
  const RunReport* r = g.full();
  if (!r) return fail(g.error);
  const auto* lr = find(r->cv_original, Algorithm::LR);
  const auto* nb = find(r->cv_original, Algorithm::NB);
  const auto* sv = find(r->cv_original, Algorithm::SVM);
  const auto rank = ranking(r->cv_original, false);
  const std::string got = "LR=" + fixed(lr->mean) + " NB=" + fixed(nb->mean) + " SVM=" + fixed(sv->mean) +
                          " top=" + to_string(rank[0]) + " run=" + format_fixed(g.run_seconds, 1) + "s";
  const bool ok = std::abs(lr->mean - 0.728592) <= 0.05 && rank[0] == Algorithm::LR &&
                  std::abs(nb->mean - 0.707762) <= 0.05 && sv->mean < 0.60 && g.run_seconds < 600.0;
  return ok ? pass(got) : fail(got);
}

Outcome cv_paper_faithful(Gated& g) {
  const RunReport* r = g.full();
  if (!r) return fail(g.error);
  if (r->cv_smote.empty()) return fail("no resampled evaluation in the default configuration");
  const auto* rf = find(r->cv_smote, Algorithm::RF);
  const auto* knn = find(r->cv_smote, Algorithm::KNN);
  const auto* lr = find(r->cv_smote, Algorithm::LR);
  const auto rank = ranking(r->cv_smote, false);
  const std::string got = "RF=" + fixed(rf->mean) + " KNN=" + fixed(knn->mean) + " LR=" + fixed(lr->mean) +
                          " ranks=" + to_string(rank[0]) + "," + to_string(rank[1]);
  const bool ok = rf->mean >= 0.90 && rank[0] == Algorithm::RF && knn->mean >= 0.84 && rank[1] == Algorithm::KNN &&
                  std::abs(lr->mean - 0.729461) <= 0.05;
  return ok ? pass(got) : fail(got);
}

Outcome holdout(Gated& g) {
  const RunReport* r = g.full();
  if (!r) return fail(g.error);
  bool ok = r->holdout_done && !r->cv_smote.empty();
  std::string got = "none:";
  for (const auto& s : r->cv_original) {
    const double a = s.holdout_auc.value_or(-1.0);
    got += std::string(" ") + to_string(s.spec.algorithm()) + "=" + fixed(a);
    ok = ok && a >= 0.45 && a <= 0.62;
  }
  if (!r->cv_smote.empty()) {
    const auto* rf = find(r->cv_smote, Algorithm::RF);
    const auto rank = ranking(r->cv_smote, true);
    got += "; smote: RF=" + fixed(rf->holdout_auc.value_or(-1.0)) + " top=" + to_string(rank[0]);
    ok = ok && rf->holdout_auc.value_or(0.0) >= 0.82 && rank[0] == Algorithm::RF;
  }
  return ok ? pass(got) : fail(got);
}

Outcome grid(Gated& g) {
  const RunReport* r = g.full();
  if (!r) return fail(g.error);
  if (!r->grid) return fail("default configuration ran no grid search");
  const auto* lr = find(r->cv_original, Algorithm::LR);
  const double diff = std::abs(r->grid->best_mean - lr->mean);
  const std::string got = "default=" + fixed(lr->mean) + " tuned=" + fixed(r->grid->best_mean) + " diff=" + fixed(diff);
  return diff < 0.02 ? pass(got) : fail(got);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    bool gated;
    std::function<Outcome(Gated&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "AUC oracle", false, [](Gated&) { return auc_oracle(); }},
      {2, "LR gradient check", false, [](Gated&) { return lr_gradient(); }},
      {3, "MI oracle", false, [](Gated&) { return mi_oracle(); }},
      {4, "outlier oracles", false, [](Gated&) { return outlier_oracle(); }},
      {5, "SMOTE geometry", false, [](Gated&) { return smote_geometry(); }},
      {6, "CART/RF", false, [](Gated&) { return cart_rf(); }},
      {7, "SVM KKT", false, [](Gated&) { return svm_kkt(); }},
      {8, "leakage check", false, [](Gated&) { return leakage(); }},
      {9, "determinism", false, [](Gated&) { return determinism(); }},
      {10, "missing report", true, missing_counts},
      {11, "class balance", true, balance},
      {12, "sigma outlier totals", true, sigma_totals},
      {13, "CV without resampling", true, cv_none},
      {14, "CV with SMOTE before folding", true, cv_paper_faithful},
      {15, "hold-out", true, holdout},
      {16, "LR grid search", true, grid},
  };

  Gated gated;
  if (const char* env = std::getenv("CHD_DATA"); env && *env) gated.path = fs::path(env);

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    if (c.gated && !gated.path) {
      out = skip("CHD_DATA not set");
    } else {
      try {
        out = c.run(gated);
      } catch (const std::exception& e) {
        out = fail(std::string("exception: ") + e.what());
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = out.status == Status::Pass ? "PASS" : out.status == Status::Fail ? "FAIL" : "SKIP";
    failures += out.status == Status::Fail;
    std::cout << tag << "  " << c.id << ". " << c.name << ": " << out.detail << " [" << format_fixed(secs, 2)
              << "s]" << std::endl;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : std::string("acceptance: ok"))
            << std::endl;
  return failures ? 1 : 0;
}
