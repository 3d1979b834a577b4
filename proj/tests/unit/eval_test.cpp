#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "chd/error.hpp"
#include "chd/eval.hpp"
#include "chd/random.hpp"

namespace chd {
namespace {

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      pairs += 1.0;
      num += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  return num / pairs;
}

std::vector<int> labels_of(std::size_t n0, std::size_t n1) {
  std::vector<int> y(n0, 0);
  y.insert(y.end(), n1, 1);
  return y;
}

Dataset blobs(std::size_t n, double shift, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), 3);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.uniform01() < 0.3 ? 1 : 0;
    for (int c = 0; c < 3; ++c) x(static_cast<Eigen::Index>(i), c) = rng.uniform01() + shift * y[i] * (c == 0);
  }
  return Dataset(x, y, {"a", "b", "c"});
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}), 0.75);
  EXPECT_EQ(roc_auc(std::vector<double>(6, 0.3), std::vector<int>{0, 1, 0, 1, 1, 0}), 0.5);
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}), 1.0);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), Error);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1}), Error);
}

TEST(RocAuc, OracleComplementAndMonotoneInvariance) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(200);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = double(rng.uniform_index(10 + trial)) / 7.0;
      y[i] = int(rng.uniform_index(2));
    }
    y[0] = 0;
    y[1] = 1;
    const double auc = roc_auc(s, y);
    EXPECT_EQ(auc, brute_auc(s, y));
    std::vector<int> flipped(n);
    for (std::size_t i = 0; i < n; ++i) flipped[i] = 1 - y[i];
    EXPECT_NEAR(auc + roc_auc(s, flipped), 1.0, 1e-12);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(3.0 * s[i]) - 5.0;
    EXPECT_EQ(roc_auc(t, y), auc);
    EXPECT_NEAR(roc_curve(s, y).area(), auc, 1e-12);
  }
}

TEST(RocCurve, Examples) {
  const RocCurve one = roc_curve(std::vector<double>{0.2, 0.9}, std::vector<int>{0, 1});
  EXPECT_EQ(one.fpr, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(one.tpr, (std::vector<double>{0, 1, 1}));
  EXPECT_EQ(one.thresholds, (std::vector<double>{0.9, 0.2}));
  const RocCurve ties = roc_curve(std::vector<double>(4, 0.5), std::vector<int>{0, 1, 0, 1});
  EXPECT_EQ(ties.fpr, (std::vector<double>{0, 1}));
  EXPECT_EQ(ties.tpr, (std::vector<double>{0, 1}));
  EXPECT_EQ(ties.area(), 0.5);
  EXPECT_NEAR(roc_curve(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}).area(),
              0.75, 1e-15);
  EXPECT_EQ(one.to_csv(), "fpr,tpr\n0.000000,0.000000\n0.000000,1.000000\n1.000000,1.000000\n");
}

TEST(StratifiedSplit, Examples) {
  const std::vector<int> y = labels_of(80, 20);
  const SplitIndices s = stratified_split_indices(y, 0.2, 7);
  std::size_t neg = 0, pos = 0;
  for (std::size_t i : s.test) (y[i] ? pos : neg)++;
  EXPECT_EQ(neg, 16u);
  EXPECT_EQ(pos, 4u);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 100u);
  const SplitIndices again = stratified_split_indices(y, 0.2, 7);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(stratified_split_indices(y, 0.2, 8).test, s.test);
  EXPECT_THROW(stratified_split_indices(labels_of(10, 1), 0.2, 1), Error);
}

TEST(StratifiedSplit, FraminghamSizedRatio) {
  const std::vector<int> y = labels_of(3465, 617);
  const SplitIndices s = stratified_split_indices(y, 0.2, 42);
  std::size_t neg = 0, pos = 0;
  for (std::size_t i : s.test) (y[i] ? pos : neg)++;
  EXPECT_NEAR(double(neg), 0.2 * 3465, 1.0);
  EXPECT_NEAR(double(pos), 0.2 * 617, 1.0);
}

TEST(StratifiedKfold, Examples) {
  const auto folds = stratified_kfold(labels_of(5, 5), 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) {
    ASSERT_EQ(f.size(), 2u);
    EXPECT_LT(f[0], 5u);
    EXPECT_GE(f[1], 5u);
  }
  const std::vector<int> y = labels_of(3465, 617);
  const auto big = stratified_kfold(y, 10, 42);
  std::set<std::size_t> seen;
  for (const auto& f : big) {
    std::size_t neg = 0, pos = 0;
    for (std::size_t i : f) (y[i] ? pos : neg)++;
    EXPECT_GE(neg, 346u);
    EXPECT_LE(neg, 347u);
    EXPECT_GE(pos, 61u);
    EXPECT_LE(pos, 62u);
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
    seen.insert(f.begin(), f.end());
  }
  EXPECT_EQ(seen.size(), y.size());
  EXPECT_THROW(stratified_kfold(labels_of(20, 3), 5, 1), Error);
  EXPECT_THROW(stratified_kfold(labels_of(20, 20), 1, 1), Error);
}

TEST(CrossValidate, ConstantScorer) {
  const Dataset d = blobs(100, 1.0, 2);
  const ClassifierSpec root_only(Algorithm::CART, {{"min_samples_split", 1e6}});
  EvalOptions opt;
  opt.folds = 5;
  const EvalSummary s = cross_validate(root_only, d, opt);
  ASSERT_EQ(s.fold_aucs.size(), 5u);
  for (double a : s.fold_aucs) EXPECT_EQ(a, 0.5);
  EXPECT_EQ(s.mean, 0.5);
  EXPECT_EQ(s.std, 0.0);
  const HoldoutResult h = holdout_evaluate(root_only, d, opt);
  EXPECT_EQ(h.auc, 0.5);
}

TEST(CrossValidate, DeterministicAcrossThreadCounts) {
  const Dataset d = blobs(150, 0.6, 4);
  for (SmoteMode mode : {SmoteMode::None, SmoteMode::PaperFaithful, SmoteMode::LeakageFree}) {
    EvalOptions opt;
    opt.folds = 5;
    opt.seed = 11;
    opt.mode = mode;
    opt.threads = 1;
    const EvalSummary a = cross_validate(ClassifierSpec(Algorithm::RF, {{"n_trees", 10.0}}, 3), d, opt);
    opt.threads = 4;
    const EvalSummary b = cross_validate(ClassifierSpec(Algorithm::RF, {{"n_trees", 10.0}}, 3), d, opt);
    EXPECT_EQ(a.fold_aucs, b.fold_aucs);
    EXPECT_EQ(a.fold_accuracies, b.fold_accuracies);
  }
}

TEST(CrossValidate, SeparableDataScoresHigh) {
  const Dataset d = blobs(200, 3.0, 6);
  EvalOptions opt;
  opt.folds = 5;
  for (Algorithm a : kAllAlgorithms) {
    const EvalSummary s = cross_validate(ClassifierSpec(a, a == Algorithm::RF ? Hyperparameters{{"n_trees", 10.0}} : Hyperparameters{}), d, opt);
    EXPECT_GT(s.mean, 0.95) << to_string(a);
  }
}

TEST(CrossValidate, LeakageFreeHoldsOutOnlyOriginals) {
  const Dataset d = blobs(120, 0.5, 8);
  EvalOptions opt;
  opt.folds = 5;
  opt.mode = SmoteMode::LeakageFree;
  std::size_t folds_seen = 0, synthetic_train = 0;
  auto observer = [&](std::size_t, const Dataset& train, const Dataset& test) {
    ++folds_seen;
    for (bool s : test.synthetic) EXPECT_FALSE(s);
    for (bool s : train.synthetic) synthetic_train += s;
    EXPECT_EQ(train.count_label(0), train.count_label(1));
  };
  cross_validate(ClassifierSpec(Algorithm::NB), d, opt, observer);
  EXPECT_EQ(folds_seen, 5u);
  EXPECT_GT(synthetic_train, 0u);
  // The resampled copy leaks synthetic rows into evaluation when SMOTE runs first.
  opt.mode = SmoteMode::PaperFaithful;
  std::size_t synthetic_test = 0;
  cross_validate(ClassifierSpec(Algorithm::NB), d, opt, [&](std::size_t, const Dataset&, const Dataset& test) {
    for (bool s : test.synthetic) synthetic_test += s;
  });
  EXPECT_GT(synthetic_test, 0u);
}

TEST(MeanAndStd, Sample) {
  const auto [m, s] = mean_and_std(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m, 2.5);
  EXPECT_DOUBLE_EQ(s, std::sqrt(5.0 / 3.0));
}

TEST(GridSearch, SingleCellAndErrors) {
  const Dataset d = blobs(80, 1.0, 3);
  EvalOptions opt;
  opt.folds = 4;
  const ClassifierSpec base(Algorithm::LR);
  const GridResult g = grid_search(base, {{"lambda", {2.0}}}, d, opt);
  ASSERT_EQ(g.cells.size(), 1u);
  EXPECT_EQ(g.best.get("lambda"), 2.0);
  EXPECT_EQ(g.best_mean, cross_validate(base.with("lambda", 2.0), d, opt).mean);
  EXPECT_THROW(grid_search(base, {}, d, opt), Error);
  EXPECT_THROW(grid_search(base, {{"lambda", {}}}, d, opt), Error);
  EXPECT_THROW(grid_search(base, {{"depth", {1.0}}}, d, opt), Error);
}

TEST(GridSearch, SmallLambdaWinsOnSeparableData) {
  Rng rng(4);
  Matrix x(60, 2);
  std::vector<int> y(60);
  for (int i = 0; i < 60; ++i) {
    y[std::size_t(i)] = i % 2;
    x(i, 0) = (i % 2 ? 1.0 : -1.0) * (0.2 + rng.uniform01());
    x(i, 1) = rng.uniform01();
  }
  const Dataset d(x, y, {"a", "b"});
  EvalOptions opt;
  opt.folds = 5;
  const GridResult g = grid_search(ClassifierSpec(Algorithm::LR), {{"lambda", {0.01, 1.0, 100.0}}}, d, opt);
  ASSERT_EQ(g.cells.size(), 3u);
  double best = -1.0;
  for (const GridCell& c : g.cells) best = std::max(best, c.summary.mean);
  EXPECT_EQ(g.best_mean, best);
  EXPECT_EQ(g.best.get("lambda"), 0.01);
  const std::string csv = g.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,max_iter,step,tol,mean,std");
}

TEST(SmoteModeNames, RoundTrip) {
  for (SmoteMode m : {SmoteMode::None, SmoteMode::PaperFaithful, SmoteMode::LeakageFree})
    EXPECT_EQ(smote_mode_from_string(to_string(m)), m);
  EXPECT_THROW(smote_mode_from_string("sometimes"), Error);
}

}  // namespace
}  // namespace chd
