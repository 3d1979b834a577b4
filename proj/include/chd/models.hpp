#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chd/dataset.hpp"

namespace chd {

enum class Algorithm { LR, KNN, CART, NB, SVM, RF };

/// Column order used by every results table.
inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::LR, Algorithm::KNN, Algorithm::CART, Algorithm::NB, Algorithm::SVM, Algorithm::RF};

const char* to_string(Algorithm algorithm) noexcept;
Algorithm algorithm_from_string(std::string_view text);

/// LR, KNN and SVM are fitted on standardized features.
bool needs_standardization(Algorithm algorithm) noexcept;

using Hyperparameters = std::map<std::string, double>;

/// Algorithm plus a complete hyper-parameter set. Unknown names and
/// out-of-range values are rejected at construction.
class ClassifierSpec {
 public:
  explicit ClassifierSpec(Algorithm algorithm, const Hyperparameters& overrides = {},
                          std::uint64_t seed = 0);

  static const Hyperparameters& defaults(Algorithm algorithm);

  Algorithm algorithm() const noexcept { return algorithm_; }
  const Hyperparameters& hyperparameters() const noexcept { return params_; }
  double get(const std::string& name) const;
  std::uint64_t seed() const noexcept { return seed_; }

  ClassifierSpec with(const std::string& name, double value) const;
  ClassifierSpec with_seed(std::uint64_t seed) const;

  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;

 private:
  Algorithm algorithm_;
  Hyperparameters params_;
  std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Fitted parameter sets

struct LogisticModel {
  Vector weights;
  double bias = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  double score(std::span<const double> x) const;
};

struct NaiveBayesModel {
  std::array<double, 2> log_prior{};
  Matrix means;      // 2 x d
  Matrix variances;  // 2 x d, floored

  double score(std::span<const double> x) const;
};

struct KnnModel {
  Matrix points;
  std::vector<int> labels;
  std::size_t k = 5;

  double score(std::span<const double> x) const;
};

struct DecisionTree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // positive fraction of the training rows reaching the node
    std::size_t samples = 0;
  };
  std::vector<Node> nodes;

  double score(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;

  double score(std::span<const double> x) const;
};

struct SvmModel {
  Matrix support_vectors;
  Vector coefficients;  // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
  bool converged = false;
  std::size_t iterations = 0;

  double score(std::span<const double> x) const;
};

using ModelParameters =
    std::variant<LogisticModel, NaiveBayesModel, KnnModel, DecisionTree, ForestModel, SvmModel>;

struct Prediction {
  double score = 0.0;
  int label = 0;
};

class TrainedModel {
 public:
  TrainedModel(ClassifierSpec spec, ModelParameters parameters, std::size_t dimension);

  const ClassifierSpec& spec() const noexcept { return spec_; }
  const ModelParameters& parameters() const noexcept { return parameters_; }
  std::size_t dimension() const noexcept { return dimension_; }
  /// False when an iterative solver hit its cap.
  bool converged() const noexcept;

  /// Probability for LR/NB/KNN/CART/RF, decision value for SVM.
  /// Throws DimensionMismatch.
  double score(std::span<const double> x) const;
  std::vector<double> score_rows(const Matrix& x) const;

  /// Label 1 iff score > 0.5 (probability models) or > 0 (SVM).
  Prediction predict(std::span<const double> x) const;
  double threshold() const noexcept;

  std::string to_json() const;
  static TrainedModel from_json(std::string_view text);

 private:
  ClassifierSpec spec_;
  ModelParameters parameters_;
  std::size_t dimension_ = 0;
};

/// Throws SingleClass (LR, NB, SVM with one class present), NonFiniteFeature.
TrainedModel fit(const ClassifierSpec& spec, const Dataset& train);

double score(const TrainedModel& model, std::span<const double> x);
Prediction predict(const TrainedModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Lower-level entry points, exposed for verification.

namespace logistic {

/// Mean negative log-likelihood + lambda/(2n) |w|^2.
double loss(const Matrix& x, std::span<const int> y, const Vector& w, double b, double lambda);

/// Gradient of loss(); grad_w resized to d.
void gradient(const Matrix& x, std::span<const int> y, const Vector& w, double b, double lambda,
              Vector& grad_w, double& grad_b);

struct Options {
  double lambda = 1.0;
  double step = 0.1;
  std::size_t max_iterations = 1000;
  double tolerance = 1e-6;
};

/// Gradient descent that only accepts non-increasing steps; the step is
/// halved on rejection. `loss_trace` receives the loss after each accepted step.
LogisticModel train(const Matrix& x, std::span<const int> y, const Options& options,
                    std::vector<double>* loss_trace = nullptr);

}  // namespace logistic

namespace tree {

struct Options {
  std::size_t min_samples_split = 2;
  std::size_t max_depth = 0;     // 0 = unlimited
  std::size_t max_features = 0;  // 0 = all features
};

/// Greedy Gini tree over the given rows (duplicates allowed). `seed` drives
/// the feature subsets when max_features < d.
DecisionTree grow(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                  const Options& options, std::uint64_t seed);

/// Gini impurity 1 - p0^2 - p1^2 from class counts.
double gini(double negatives, double positives);

}  // namespace tree

namespace svm {

struct Solution {
  std::vector<double> alpha;  // one per training row
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double max_violation = 0.0;  // m(alpha) - M(alpha) at exit
};

double rbf(std::span<const double> a, std::span<const double> b, double gamma);

/// 1 / (d * mean per-feature variance); 1 when the data has no spread.
double scale_gamma(const Matrix& x);

/// Soft-margin dual by SMO with second-order working-set selection.
/// Labels are 0/1 and mapped to -1/+1.
Solution solve(const Matrix& x, std::span<const int> y, double c, double gamma, double tolerance,
               std::size_t max_iterations);

}  // namespace svm

}  // namespace chd
