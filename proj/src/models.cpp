#include "chd/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"
#include "chd/parallel.hpp"
#include "chd/random.hpp"

namespace chd {

const char* to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::LR: return "LR";
    case Algorithm::KNN: return "KNN";
    case Algorithm::CART: return "CART";
    case Algorithm::NB: return "NB";
    case Algorithm::SVM: return "SVM";
    case Algorithm::RF: return "RF";
  }
  return "LR";
}

Algorithm algorithm_from_string(std::string_view text) {
  const auto key = to_lower(trim(text));
  for (auto a : kAllAlgorithms)
    if (to_lower(to_string(a)) == key) return a;
  throw Error(Errc::ConfigError, "unknown algorithm '" + std::string(text) + "'");
}

bool needs_standardization(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::LR || algorithm == Algorithm::KNN || algorithm == Algorithm::SVM;
}

// ---------------------------------------------------------------------------
// ClassifierSpec

const Hyperparameters& ClassifierSpec::defaults(Algorithm algorithm) {
  static const std::map<Algorithm, Hyperparameters> table = {
      {Algorithm::LR, {{"lambda", 1.0}, {"step", 0.1}, {"max_iter", 1000}, {"tol", 1e-6}}},
      {Algorithm::NB, {{"var_smoothing", 1e-9}}},
      {Algorithm::KNN, {{"k", 5}}},
      {Algorithm::CART, {{"min_samples_split", 2}, {"max_depth", 0}}},
      {Algorithm::RF,
       {{"n_trees", 100}, {"min_samples_split", 2}, {"max_depth", 0}, {"max_features", 0},
        {"bootstrap", 1}}},
      {Algorithm::SVM, {{"C", 1.0}, {"gamma", 0.0}, {"tol", 1e-3}, {"max_iter_factor", 10}}},
  };
  return table.at(algorithm);
}

namespace {

void check_hyperparameter(Algorithm algorithm, const std::string& name, double v) {
  auto fail = [&](const char* why) {
    throw Error(Errc::InvalidHyperparameter, std::string(to_string(algorithm)) + "." + name + "=" +
                                                 format_real(v) + " " + why);
  };
  if (!std::isfinite(v)) fail("is not finite");
  static const char* integral[] = {"max_iter", "k", "min_samples_split", "max_depth",
                                   "max_features", "n_trees", "bootstrap", "max_iter_factor"};
  for (const char* key : integral) {
    if (name == key && (v < 0 || v != std::floor(v))) fail("must be a non-negative integer");
  }
  if ((name == "k" || name == "n_trees" || name == "max_iter" || name == "max_iter_factor") && v < 1)
    fail("must be >= 1");
  if (name == "min_samples_split" && v < 2) fail("must be >= 2");
  if (name == "bootstrap" && v != 0 && v != 1) fail("must be 0 or 1");
  if ((name == "step" || name == "tol" || name == "C") && !(v > 0)) fail("must be > 0");
  if ((name == "lambda" || name == "gamma" || name == "var_smoothing") && v < 0) fail("must be >= 0");
}

}  // namespace

ClassifierSpec::ClassifierSpec(Algorithm algorithm, const Hyperparameters& overrides,
                               std::uint64_t seed)
    : algorithm_(algorithm), params_(defaults(algorithm)), seed_(seed) {
  for (const auto& [name, value] : overrides) {
    auto it = params_.find(name);
    if (it == params_.end())
      throw Error(Errc::UnknownHyperparameter, std::string(to_string(algorithm)) + "." + name);
    check_hyperparameter(algorithm, name, value);
    it->second = value;
  }
}

double ClassifierSpec::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw Error(Errc::UnknownHyperparameter, std::string(to_string(algorithm_)) + "." + name);
  return it->second;
}

ClassifierSpec ClassifierSpec::with(const std::string& name, double value) const {
  Hyperparameters p = params_;
  if (!p.contains(name))
    throw Error(Errc::UnknownHyperparameter, std::string(to_string(algorithm_)) + "." + name);
  p[name] = value;
  return ClassifierSpec(algorithm_, p, seed_);
}

ClassifierSpec ClassifierSpec::with_seed(std::uint64_t seed) const {
  ClassifierSpec out = *this;
  out.seed_ = seed;
  return out;
}

// ---------------------------------------------------------------------------
// Naive Bayes and KNN

double NaiveBayesModel::score(std::span<const double> x) const {
  std::array<double, 2> joint = log_prior;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double var = variances(c, jj);
      const double d = x[j] - means(c, jj);
      joint[static_cast<std::size_t>(c)] -= 0.5 * std::log(2.0 * std::numbers::pi * var) + d * d / (2.0 * var);
    }
  }
  if (joint[0] == -INFINITY && joint[1] == -INFINITY) return 0.5;
  const double diff = joint[0] - joint[1];
  if (diff > 0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

namespace {

NaiveBayesModel fit_naive_bayes(const Matrix& x, std::span<const int> y, double smoothing) {
  const auto n = x.rows();
  const auto d = x.cols();
  NaiveBayesModel m;
  m.means = Matrix::Zero(2, d);
  m.variances = Matrix::Zero(2, d);
  std::array<double, 2> counts{};
  for (Eigen::Index r = 0; r < n; ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    counts[static_cast<std::size_t>(c)] += 1.0;
    m.means.row(c) += x.row(r);
  }
  for (int c = 0; c < 2; ++c) m.means.row(c) /= counts[static_cast<std::size_t>(c)];
  for (Eigen::Index r = 0; r < n; ++r) {
    const int c = y[static_cast<std::size_t>(r)];
    m.variances.row(c).array() += (x.row(r) - m.means.row(c)).array().square();
  }
  for (int c = 0; c < 2; ++c) m.variances.row(c) /= counts[static_cast<std::size_t>(c)];

  double max_var = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = x.col(j).mean();
    max_var = std::max(max_var, (x.col(j).array() - mean).square().mean());
  }
  double floor = smoothing * max_var;
  if (!(floor > 0.0)) floor = std::max(smoothing, 1e-300);
  m.variances = m.variances.cwiseMax(floor);
  for (int c = 0; c < 2; ++c)
    m.log_prior[static_cast<std::size_t>(c)] = std::log(counts[static_cast<std::size_t>(c)] / static_cast<double>(n));
  return m;
}

}  // namespace

double KnnModel::score(std::span<const double> x) const {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 0) return 0.0;
  const std::size_t keff = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - x[j];
      s += diff * diff;
    }
    dist[i] = {s, i};
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(keff - 1), dist.end());
  std::size_t positives = 0;
  for (std::size_t m = 0; m < keff; ++m) positives += labels[dist[m].second] == 1 ? 1 : 0;
  return static_cast<double>(positives) / static_cast<double>(keff);
}

// ---------------------------------------------------------------------------
// TrainedModel

TrainedModel::TrainedModel(ClassifierSpec spec, ModelParameters parameters, std::size_t dimension)
    : spec_(std::move(spec)), parameters_(std::move(parameters)), dimension_(dimension) {}

bool TrainedModel::converged() const noexcept {
  if (auto* lr = std::get_if<LogisticModel>(&parameters_)) return lr->converged;
  if (auto* sv = std::get_if<SvmModel>(&parameters_)) return sv->converged;
  return true;
}

double TrainedModel::score(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw Error(Errc::DimensionMismatch,
                "expected " + std::to_string(dimension_) + " features, got " + std::to_string(x.size()));
  return std::visit([&](const auto& p) { return p.score(x); }, parameters_);
}

std::vector<double> TrainedModel::score_rows(const Matrix& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    out[static_cast<std::size_t>(r)] =
        score(std::span<const double>(x.data() + r * x.cols(), static_cast<std::size_t>(x.cols())));
  return out;
}

double TrainedModel::threshold() const noexcept {
  return spec_.algorithm() == Algorithm::SVM ? 0.0 : 0.5;
}

Prediction TrainedModel::predict(std::span<const double> x) const {
  const double s = score(x);
  return {s, s > threshold() ? 1 : 0};
}

double score(const TrainedModel& model, std::span<const double> x) { return model.score(x); }
Prediction predict(const TrainedModel& model, std::span<const double> x) { return model.predict(x); }

// ---------------------------------------------------------------------------
// fit

TrainedModel fit(const ClassifierSpec& spec, const Dataset& train) {
  if (train.rows() == 0) throw Error(Errc::InvalidArgument, "cannot fit on an empty dataset");
  for (Eigen::Index i = 0; i < train.features.size(); ++i)
    if (!std::isfinite(train.features.data()[i]))
      throw Error(Errc::NonFiniteFeature, "training features must be finite");
  const std::size_t positives = train.count_label(1);
  const bool single_class = positives == 0 || positives == train.rows();
  const auto algorithm = spec.algorithm();
  if (single_class && (algorithm == Algorithm::LR || algorithm == Algorithm::NB || algorithm == Algorithm::SVM))
    throw Error(Errc::SingleClass, std::string(to_string(algorithm)) + " needs both classes");

  const auto as_size = [&](const char* name) { return static_cast<std::size_t>(spec.get(name)); };
  const Matrix& x = train.features;
  const std::span<const int> y(train.labels);

  switch (algorithm) {
    case Algorithm::LR: {
      logistic::Options opt;
      opt.lambda = spec.get("lambda");
      opt.step = spec.get("step");
      opt.max_iterations = as_size("max_iter");
      opt.tolerance = spec.get("tol");
      return TrainedModel(spec, logistic::train(x, y, opt), train.cols());
    }
    case Algorithm::NB:
      return TrainedModel(spec, fit_naive_bayes(x, y, spec.get("var_smoothing")), train.cols());
    case Algorithm::KNN:
      return TrainedModel(spec, KnnModel{x, train.labels, as_size("k")}, train.cols());
    case Algorithm::CART: {
      tree::Options opt{as_size("min_samples_split"), as_size("max_depth"), 0};
      std::vector<std::size_t> rows(train.rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      return TrainedModel(spec, tree::grow(x, y, rows, opt, spec.seed()), train.cols());
    }
    case Algorithm::RF: {
      const std::size_t d = train.cols();
      std::size_t mtry = as_size("max_features");
      if (mtry == 0) mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
      mtry = std::min(mtry, d);
      tree::Options opt{as_size("min_samples_split"), as_size("max_depth"), mtry};
      const bool bootstrap = spec.get("bootstrap") != 0.0;
      ForestModel forest;
      forest.trees.resize(as_size("n_trees"));
      parallel_for(forest.trees.size(), [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(spec.seed(), t);
        Rng rng(tree_seed);
        std::vector<std::size_t> rows(train.rows());
        for (std::size_t i = 0; i < rows.size(); ++i)
          rows[i] = bootstrap ? rng.uniform_index(rows.size()) : i;
        forest.trees[t] = tree::grow(x, y, rows, opt, rng.next());
      });
      return TrainedModel(spec, std::move(forest), train.cols());
    }
    case Algorithm::SVM: {
      double gamma = spec.get("gamma");
      if (gamma == 0.0) gamma = svm::scale_gamma(x);
      const std::size_t cap = as_size("max_iter_factor") * train.rows();
      const auto sol = svm::solve(x, y, spec.get("C"), gamma, spec.get("tol"), cap);
      SvmModel m;
      m.gamma = gamma;
      m.bias = sol.bias;
      m.converged = sol.converged;
      m.iterations = sol.iterations;
      std::vector<Eigen::Index> support;
      for (std::size_t i = 0; i < sol.alpha.size(); ++i)
        if (sol.alpha[i] > 0.0) support.push_back(static_cast<Eigen::Index>(i));
      m.support_vectors.resize(static_cast<Eigen::Index>(support.size()), x.cols());
      m.coefficients.resize(static_cast<Eigen::Index>(support.size()));
      for (std::size_t s = 0; s < support.size(); ++s) {
        const auto i = support[s];
        m.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(i);
        m.coefficients(static_cast<Eigen::Index>(s)) =
            sol.alpha[static_cast<std::size_t>(i)] * (y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0);
      }
      return TrainedModel(spec, std::move(m), train.cols());
    }
  }
  throw Error(Errc::InvalidArgument, "unhandled algorithm");
}

}  // namespace chd
