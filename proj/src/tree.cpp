#include <algorithm>
#include <cmath>
#include <numeric>

#include "chd/error.hpp"
#include "chd/models.hpp"
#include "chd/random.hpp"

namespace chd {

double DecisionTree::score(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[node].value;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes[i].feature >= 0) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature < 0; }));
}

double ForestModel::score(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.score(x);
  return sum / static_cast<double>(trees.size());
}

namespace tree {

double gini(double negatives, double positives) {
  const double n = negatives + positives;
  if (n <= 0) return 0.0;
  const double p0 = negatives / n;
  const double p1 = positives / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // n_left * gini_left + n_right * gini_right
};

bool better(const Split& candidate, const Split& best) {
  if (!best.found) return true;
  if (candidate.impurity != best.impurity) return candidate.impurity < best.impurity;
  if (candidate.feature != best.feature) return candidate.feature < best.feature;
  return candidate.threshold < best.threshold;
}

// n * gini with integer counts, so identical partitions compare equal.
double weighted_gini(double neg, double pos) {
  const double n = neg + pos;
  return n - (neg * neg + pos * pos) / n;
}

struct Work {
  std::size_t node;
  std::size_t begin;
  std::size_t end;
  std::size_t depth;
};

class Grower {
 public:
  Grower(const Matrix& x, std::span<const int> y, const Options& options, std::uint64_t seed)
      : x_(x), y_(y), options_(options), rng_(seed) {}

  DecisionTree run(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    tree_.nodes.clear();
    tree_.nodes.emplace_back();
    std::vector<Work> stack{{0, 0, rows_.size(), 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      process(w, stack);
    }
    return std::move(tree_);
  }

 private:
  double value(std::size_t r, int f) const {
    return x_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f));
  }

  void process(const Work& w, std::vector<Work>& stack) {
    const std::size_t n = w.end - w.begin;
    std::size_t pos = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) pos += y_[rows_[i]] == 1 ? 1 : 0;
    auto& node = tree_.nodes[w.node];
    node.samples = n;
    node.value = n ? static_cast<double>(pos) / static_cast<double>(n) : 0.0;

    const bool pure = pos == 0 || pos == n;
    const bool depth_capped = options_.max_depth != 0 && w.depth >= options_.max_depth;
    if (pure || n < options_.min_samples_split || depth_capped) return;

    const Split split = best_split(w, pos);
    if (!split.found) return;

    // Partition rows in place: left = x <= threshold.
    auto mid = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(w.begin), rows_.begin() + static_cast<std::ptrdiff_t>(w.end),
        [&](std::size_t r) { return value(r, split.feature) <= split.threshold; });
    const auto mid_index = static_cast<std::size_t>(mid - rows_.begin());

    const std::size_t left = tree_.nodes.size();
    tree_.nodes.emplace_back();
    tree_.nodes.emplace_back();
    auto& parent = tree_.nodes[w.node];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = static_cast<int>(left);
    parent.right = static_cast<int>(left + 1);
    // Right pushed first so the left subtree is grown first.
    stack.push_back({left + 1, mid_index, w.end, w.depth + 1});
    stack.push_back({left, w.begin, mid_index, w.depth + 1});
  }

  Split best_split(const Work& w, std::size_t positives) {
    const auto d = static_cast<std::size_t>(x_.cols());
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t wanted = options_.max_features == 0 ? d : std::min(options_.max_features, d);
    if (wanted < d) rng_.shuffle(std::span<std::size_t>(order));

    Split best;
    std::size_t evaluated = 0;
    for (std::size_t f : order) {
      if (evaluated == wanted) break;
      if (evaluate_feature(w, positives, static_cast<int>(f), best)) ++evaluated;
    }
    return best;
  }

  // Returns false when the feature is constant within the node.
  bool evaluate_feature(const Work& w, std::size_t positives, int f, Split& best) {
    sorted_.clear();
    for (std::size_t i = w.begin; i < w.end; ++i) sorted_.emplace_back(value(rows_[i], f), y_[rows_[i]]);
    std::sort(sorted_.begin(), sorted_.end());
    if (sorted_.front().first == sorted_.back().first) return false;

    const double total = static_cast<double>(sorted_.size());
    const double total_pos = static_cast<double>(positives);
    double left_pos = 0.0;
    for (std::size_t i = 0; i + 1 < sorted_.size(); ++i) {
      left_pos += sorted_[i].second == 1 ? 1.0 : 0.0;
      const double a = sorted_[i].first;
      const double b = sorted_[i + 1].first;
      if (a == b) continue;
      const double left_n = static_cast<double>(i + 1);
      const double right_n = total - left_n;
      const double right_pos = total_pos - left_pos;
      Split candidate;
      candidate.found = true;
      candidate.feature = f;
      candidate.threshold = a + (b - a) / 2.0;
      if (candidate.threshold >= b) candidate.threshold = a;
      candidate.impurity =
          weighted_gini(left_n - left_pos, left_pos) + weighted_gini(right_n - right_pos, right_pos);
      if (better(candidate, best)) best = candidate;
    }
    return true;
  }

  const Matrix& x_;
  std::span<const int> y_;
  Options options_;
  Rng rng_;
  std::vector<std::size_t> rows_;
  std::vector<std::pair<double, int>> sorted_;
  DecisionTree tree_;
};

}  // namespace

DecisionTree grow(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                  const Options& options, std::uint64_t seed) {
  if (rows.empty()) throw Error(Errc::InvalidArgument, "cannot grow a tree on zero rows");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error(Errc::LengthMismatch, "labels vs rows");
  Grower grower(x, y, options, seed);
  return grower.run(std::vector<std::size_t>(rows.begin(), rows.end()));
}

}  // namespace tree
}  // namespace chd
