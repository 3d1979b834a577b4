#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chd/dataset.hpp"
#include "chd/models.hpp"
#include "chd/resample.hpp"

namespace chd {

/// Where SMOTE runs relative to the evaluation split.
/// PaperFaithful resamples the whole dataset before folding or splitting;
/// LeakageFree resamples only each training portion.
enum class SmoteMode { None, PaperFaithful, LeakageFree };

const char* to_string(SmoteMode mode) noexcept;
SmoteMode smote_mode_from_string(std::string_view text);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class: seeded shuffle, then the first round(test_fraction * count)
/// members go to test. Both index lists are returned in ascending order.
/// Throws ClassTooSmall when a class has fewer than 2 members.
SplitIndices stratified_split_indices(std::span<const int> labels, double test_fraction,
                                      std::uint64_t seed);
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed);

/// Per class: seeded shuffle, then a round-robin deal that continues across
/// classes. Each fold is sorted ascending. Throws ClassTooSmall when a class
/// has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed);

/// Mann-Whitney AUC with midranks for tied scores. Throws SingleClass.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  // thresholds[i] produced point i + 1; point 0 is (0, 0).
  std::vector<double> thresholds;

  double area() const;
  std::string to_csv() const;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

struct EvalOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  SmoteMode mode = SmoteMode::None;
  SmoteParams smote;
  double test_fraction = 0.2;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

/// Sees the exact train / evaluation sets of every fold (fold index, train, test),
/// after resampling and before standardization.
using FoldObserver = std::function<void(std::size_t, const Dataset&, const Dataset&)>;

struct EvalSummary {
  ClassifierSpec spec;
  SmoteMode mode = SmoteMode::None;
  std::vector<double> fold_aucs;
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  std::optional<double> holdout_auc;
  std::optional<double> holdout_accuracy;
  bool converged = true;

  std::string to_json() const;
};

/// Mean and sample standard deviation.
std::pair<double, double> mean_and_std(std::span<const double> values);

EvalSummary cross_validate(const ClassifierSpec& spec, const Dataset& dataset,
                           const EvalOptions& options, const FoldObserver& observer = {});

struct HoldoutResult {
  double auc = 0.5;
  double accuracy = 0.0;
  bool converged = true;
};

HoldoutResult holdout_evaluate(const ClassifierSpec& spec, const Dataset& dataset,
                               const EvalOptions& options, const FoldObserver& observer = {});

/// Ordered hyper-parameter axes; the first axis varies slowest.
using Grid = std::vector<std::pair<std::string, std::vector<double>>>;

struct GridCell {
  ClassifierSpec spec;
  EvalSummary summary;
};

struct GridResult {
  ClassifierSpec best;
  double best_mean = 0.0;
  std::vector<GridCell> cells;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Exhaustive cross-validated search; the earliest cell wins ties.
/// Throws EmptyGrid, UnknownHyperparameter.
GridResult grid_search(const ClassifierSpec& spec, const Grid& grid, const Dataset& dataset,
                       const EvalOptions& options);

}  // namespace chd
