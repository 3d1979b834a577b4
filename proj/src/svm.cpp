#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "chd/error.hpp"
#include "chd/models.hpp"

namespace chd {

double SvmModel::score(std::span<const double> x) const {
  double sum = bias;
  for (Eigen::Index s = 0; s < support_vectors.rows(); ++s) {
    const std::span<const double> sv(support_vectors.data() + s * support_vectors.cols(),
                                     static_cast<std::size_t>(support_vectors.cols()));
    sum += coefficients(s) * svm::rbf(sv, x, gamma);
  }
  return sum;
}

namespace svm {

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d2 = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    d2 += diff * diff;
  }
  return std::exp(-gamma * d2);
}

double scale_gamma(const Matrix& x) {
  if (x.cols() == 0 || x.rows() == 0) return 1.0;
  double total = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    total += (x.col(j).array() - mean).square().mean();
  }
  const double mean_var = total / static_cast<double>(x.cols());
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * mean_var) : 1.0;
}

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kCacheBytes = std::size_t{256} << 20;

// LRU cache of kernel matrix rows.
class KernelRows {
 public:
  KernelRows(const Matrix& x, double gamma) : x_(x), gamma_(gamma) {
    const auto n = static_cast<std::size_t>(x.rows());
    capacity_ = std::max<std::size_t>(2, kCacheBytes / (sizeof(double) * std::max<std::size_t>(n, 1)));
  }

  const std::vector<double>& row(std::size_t i) {
    auto it = rows_.find(i);
    if (it != rows_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    if (rows_.size() >= capacity_) {
      rows_.erase(lru_.back());
      lru_.pop_back();
    }
    lru_.push_front(i);
    auto& entry = rows_[i];
    entry.second = lru_.begin();
    const auto n = static_cast<std::size_t>(x_.rows());
    entry.first.resize(n);
    const auto xi = sample(i);
    for (std::size_t t = 0; t < n; ++t) entry.first[t] = rbf(xi, sample(t), gamma_);
    return entry.first;
  }

 private:
  std::span<const double> sample(std::size_t i) const {
    return {x_.data() + static_cast<Eigen::Index>(i) * x_.cols(), static_cast<std::size_t>(x_.cols())};
  }

  const Matrix& x_;
  double gamma_;
  std::size_t capacity_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> rows_;
};

}  // namespace

Solution solve(const Matrix& x, std::span<const int> labels, double c, double gamma,
               double tolerance, std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n) throw Error(Errc::LengthMismatch, "labels vs rows");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;

  Solution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double>& alpha = sol.alpha;
  std::vector<double> grad(n, -1.0);  // G = Q alpha - e
  KernelRows kernel(x, gamma);

  const auto upper = [&](std::size_t t) { return alpha[t] >= c; };
  const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  while (true) {
    // i maximizes -y G over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i_index = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? !upper(t) : !lower(t)) {
        const double v = -y[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          i_index = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    if (i_index < 0) {
      sol.converged = true;
      sol.max_violation = 0.0;
      break;
    }
    const auto i = static_cast<std::size_t>(i_index);
    const std::vector<double>& ki = kernel.row(i);

    // j: second-order selection over I_low.
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j_index = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? lower(t) : upper(t)) continue;
      const double v = y[t] * grad[t];
      gmax2 = std::max(gmax2, v);
      const double diff = gmax + v;
      if (diff > 0) {
        double quad = ki[i] + 1.0 - 2.0 * ki[t];
        if (quad <= 0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj <= best_obj) {
          best_obj = obj;
          j_index = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    sol.max_violation = gmax + gmax2;
    if (gmax + gmax2 < tolerance || j_index < 0) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iterations) break;
    ++sol.iterations;

    const auto j = static_cast<std::size_t>(j_index);
    const std::vector<double>& kj = kernel.row(j);
    const std::vector<double>& kii = kernel.row(i);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double quad = kii[i] + kj[j] - 2.0 * kii[j];
    if (quad <= 0) quad = kTau;

    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }

    const double di = (alpha[i] - old_i) * y[i];
    const double dj = (alpha[j] - old_j) * y[j];
    for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (kii[t] * di + kj[t] * dj);
  }

  // Bias from the free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;
  sol.bias = -rho;
  return sol;
}

}  // namespace svm
}  // namespace chd
