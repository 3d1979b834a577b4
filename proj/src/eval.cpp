#include "chd/eval.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"
#include "chd/parallel.hpp"
#include "chd/preprocess.hpp"
#include "chd/random.hpp"

namespace chd {

const char* to_string(SmoteMode mode) noexcept {
  switch (mode) {
    case SmoteMode::None: return "none";
    case SmoteMode::PaperFaithful: return "paper-faithful";
    case SmoteMode::LeakageFree: return "leakage-free";
  }
  return "none";
}

SmoteMode smote_mode_from_string(std::string_view text) {
  const auto key = to_lower(trim(text));
  if (key == "none") return SmoteMode::None;
  if (key == "paper-faithful" || key == "paperfaithful") return SmoteMode::PaperFaithful;
  if (key == "leakage-free" || key == "leakagefree") return SmoteMode::LeakageFree;
  throw Error(Errc::ConfigError, "unknown SMOTE mode '" + std::string(text) + "'");
}

namespace {

std::array<std::vector<std::size_t>, 2> rows_by_class(std::span<const int> labels) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error(Errc::InvalidValue, "labels must be 0 or 1");
    out[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return out;
}

}  // namespace

SplitIndices stratified_split_indices(std::span<const int> labels, double test_fraction,
                                      std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(Errc::InvalidArgument, "test_fraction must be in (0, 1)");
  auto classes = rows_by_class(labels);
  SplitIndices out;
  for (std::size_t c = 0; c < 2; ++c) {
    auto& rows = classes[c];
    if (rows.size() < 2)
      throw Error(Errc::ClassTooSmall, "class " + std::to_string(c) + " has " +
                                           std::to_string(rows.size()) + " rows");
    Rng rng(derive_seed(seed, c));
    rng.shuffle(std::span<std::size_t>(rows));
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
    out.test.insert(out.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed) {
  const auto idx = stratified_split_indices(dataset.labels, test_fraction, seed);
  return {dataset.take_rows(idx.train), dataset.take_rows(idx.test)};
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw Error(Errc::InvalidArgument, "k-fold needs k >= 2");
  auto classes = rows_by_class(labels);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t slot = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    auto& rows = classes[c];
    if (rows.size() < k)
      throw Error(Errc::ClassTooSmall, "class " + std::to_string(c) + " has " +
                                           std::to_string(rows.size()) + " rows for " +
                                           std::to_string(k) + " folds");
    Rng rng(derive_seed(seed, c));
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t r : rows) {
      folds[slot].push_back(r);
      slot = (slot + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

// ---------------------------------------------------------------------------
// ROC

namespace {

void check_scores(std::span<const double> scores, std::span<const int> labels,
                  std::size_t& positives, std::size_t& negatives) {
  if (scores.size() != labels.size()) throw Error(Errc::LengthMismatch, "scores vs labels");
  positives = negatives = 0;
  for (int y : labels) {
    if (y == 1) ++positives;
    else if (y == 0) ++negatives;
    else throw Error(Errc::InvalidValue, "labels must be 0 or 1");
  }
  if (positives == 0 || negatives == 0) throw Error(Errc::SingleClass, "AUC needs both labels");
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  std::size_t n1 = 0;
  std::size_t n0 = 0;
  check_scores(scores, labels, n1, n0);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    // ranks i+1 .. j+1 share their mean
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]] == 1) rank_sum += midrank;
    i = j + 1;
  }
  const double p = static_cast<double>(n1);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(n0));
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  std::size_t n1 = 0;
  std::size_t n0 = 0;
  check_scores(scores, labels, n1, n0);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) ++tp; else ++fp;
      ++i;
    }
    curve.thresholds.push_back(threshold);
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n0));
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n1));
  }
  return curve;
}

double RocCurve::area() const {
  double a = 0.0;
  for (std::size_t i = 1; i < fpr.size(); ++i) a += (fpr[i] - fpr[i - 1]) * (tpr[i] + tpr[i - 1]) / 2.0;
  return a;
}

std::string RocCurve::to_csv() const {
  std::string out = "fpr,tpr\n";
  for (std::size_t i = 0; i < fpr.size(); ++i) out += format_fixed(fpr[i], 6) + "," + format_fixed(tpr[i], 6) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Cross-validation and hold-out

std::pair<double, double> mean_and_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::string EvalSummary::to_json() const {
  nlohmann::ordered_json doc;
  doc["algorithm"] = to_string(spec.algorithm());
  doc["hyperparameters"] = nlohmann::ordered_json(spec.hyperparameters());
  doc["seed"] = spec.seed();
  doc["mode"] = to_string(mode);
  doc["fold_aucs"] = fold_aucs;
  doc["fold_accuracies"] = fold_accuracies;
  doc["mean"] = mean;
  doc["std"] = std;
  doc["holdout_auc"] = holdout_auc ? nlohmann::ordered_json(*holdout_auc) : nlohmann::ordered_json();
  doc["holdout_accuracy"] =
      holdout_accuracy ? nlohmann::ordered_json(*holdout_accuracy) : nlohmann::ordered_json();
  doc["converged"] = converged;
  return doc.dump(2);
}

namespace {

struct FitScore {
  double auc = 0.5;
  double accuracy = 0.0;
  bool converged = true;
};

FitScore fit_and_score(const ClassifierSpec& spec, const Dataset& train, const Dataset& test) {
  const Dataset* fit_on = &train;
  const Dataset* score_on = &test;
  Dataset scaled_train;
  Dataset scaled_test;
  if (needs_standardization(spec.algorithm())) {
    const auto scaler = Standardizer::fit(train, /*allow_constant=*/true);
    scaled_train = scaler.apply(train);
    scaled_test = scaler.apply(test);
    fit_on = &scaled_train;
    score_on = &scaled_test;
  }
  const auto model = fit(spec, *fit_on);
  const auto scores = model.score_rows(score_on->features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int label = scores[i] > model.threshold() ? 1 : 0;
    correct += label == score_on->labels[i] ? 1 : 0;
  }
  FitScore out;
  out.auc = roc_auc(scores, score_on->labels);
  out.accuracy = static_cast<double>(correct) / static_cast<double>(scores.size());
  out.converged = model.converged();
  return out;
}

SmoteParams stream_params(const SmoteParams& base, std::uint64_t index) {
  SmoteParams p = base;
  p.seed = derive_seed(base.seed, index);
  return p;
}

}  // namespace

EvalSummary cross_validate(const ClassifierSpec& spec, const Dataset& dataset,
                           const EvalOptions& options, const FoldObserver& observer) {
  const Dataset resampled =
      options.mode == SmoteMode::PaperFaithful ? smote(dataset, options.smote) : Dataset{};
  const Dataset& data = options.mode == SmoteMode::PaperFaithful ? resampled : dataset;

  const auto folds = stratified_kfold(data.labels, options.folds, options.seed);
  std::vector<FitScore> results(folds.size());
  std::vector<Dataset> trains(folds.size());
  std::vector<Dataset> tests(folds.size());

  parallel_for(
      folds.size(),
      [&](std::size_t f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < folds.size(); ++g)
          if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());
        Dataset train = data.take_rows(train_rows);
        Dataset test = data.take_rows(folds[f]);
        if (options.mode == SmoteMode::LeakageFree) train = smote(train, stream_params(options.smote, f));
        results[f] = fit_and_score(spec, train, test);
        if (observer) {
          trains[f] = std::move(train);
          tests[f] = std::move(test);
        }
      },
      options.threads);

  EvalSummary summary{spec, options.mode};
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (observer) observer(f, trains[f], tests[f]);
    summary.fold_aucs.push_back(results[f].auc);
    summary.fold_accuracies.push_back(results[f].accuracy);
    summary.converged = summary.converged && results[f].converged;
  }
  std::tie(summary.mean, summary.std) = mean_and_std(summary.fold_aucs);
  return summary;
}

HoldoutResult holdout_evaluate(const ClassifierSpec& spec, const Dataset& dataset,
                               const EvalOptions& options, const FoldObserver& observer) {
  const Dataset resampled =
      options.mode == SmoteMode::PaperFaithful ? smote(dataset, options.smote) : Dataset{};
  const Dataset& data = options.mode == SmoteMode::PaperFaithful ? resampled : dataset;
  auto [train, test] = stratified_split(data, options.test_fraction, options.seed);
  if (options.mode == SmoteMode::LeakageFree) train = smote(train, options.smote);
  if (observer) observer(0, train, test);
  const auto r = fit_and_score(spec, train, test);
  return {r.auc, r.accuracy, r.converged};
}

// ---------------------------------------------------------------------------
// Grid search

std::string GridResult::to_csv() const {
  std::string out;
  if (cells.empty()) return out;
  const auto& names = cells.front().spec.hyperparameters();
  for (const auto& [name, value] : names) out += name + ",";
  out += "mean,std\n";
  for (const auto& cell : cells) {
    for (const auto& [name, value] : cell.spec.hyperparameters()) out += format_real(value) + ",";
    out += format_fixed(cell.summary.mean, 6) + "," + format_fixed(cell.summary.std, 6) + "\n";
  }
  return out;
}

std::string GridResult::to_json() const {
  nlohmann::ordered_json doc;
  doc["algorithm"] = to_string(best.algorithm());
  doc["best_hyperparameters"] = nlohmann::ordered_json(best.hyperparameters());
  doc["best_mean"] = best_mean;
  auto& rows = doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& cell : cells) {
    nlohmann::ordered_json row;
    row["hyperparameters"] = nlohmann::ordered_json(cell.spec.hyperparameters());
    row["mean"] = cell.summary.mean;
    row["std"] = cell.summary.std;
    row["fold_aucs"] = cell.summary.fold_aucs;
    rows.push_back(std::move(row));
  }
  return doc.dump(2);
}

GridResult grid_search(const ClassifierSpec& spec, const Grid& grid, const Dataset& dataset,
                       const EvalOptions& options) {
  if (grid.empty()) throw Error(Errc::EmptyGrid, "grid has no axes");
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw Error(Errc::EmptyGrid, "axis '" + name + "' has no values");
    spec.get(name);  // throws UnknownHyperparameter
  }

  std::vector<ClassifierSpec> candidates{spec};
  for (const auto& [name, values] : grid) {
    std::vector<ClassifierSpec> next;
    for (const auto& base : candidates)
      for (double v : values) next.push_back(base.with(name, v));
    candidates = std::move(next);
  }

  GridResult result{spec, 0.0, {}};
  bool first = true;
  for (const auto& candidate : candidates) {
    auto summary = cross_validate(candidate, dataset, options);
    if (first || summary.mean > result.best_mean) {
      result.best = candidate;
      result.best_mean = summary.mean;
      first = false;
    }
    result.cells.push_back({candidate, std::move(summary)});
  }
  return result;
}

}  // namespace chd
