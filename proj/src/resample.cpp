#include "chd/resample.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "chd/error.hpp"
#include "chd/random.hpp"

namespace chd {

void SmoteParams::validate() const {
  if (k_neighbors < 1) throw Error(Errc::InvalidArgument, "SMOTE k_neighbors must be >= 1");
  if (!(target_ratio > 0.0)) throw Error(Errc::InvalidArgument, "SMOTE target_ratio must be > 0");
}

std::vector<std::vector<std::size_t>> minority_neighbors(const Matrix& points, std::size_t k) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n < 2) throw Error(Errc::TooFewMinority, "need at least 2 minority rows, got " + std::to_string(n));
  const std::size_t keff = std::min(k, n - 1);
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    const auto xi = points.row(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((points.row(static_cast<Eigen::Index>(j)) - xi).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(keff), dist.end());
    out[i].reserve(keff);
    for (std::size_t m = 0; m < keff; ++m) out[i].push_back(dist[m].second);
  }
  return out;
}

Dataset smote(const Dataset& dataset, const SmoteParams& params) {
  params.validate();
  const std::size_t n0 = dataset.count_label(0);
  const std::size_t n1 = dataset.count_label(1);
  if (n0 == 0 || n1 == 0) throw Error(Errc::SingleClass, "SMOTE needs both classes");
  const int minority = n1 <= n0 ? 1 : 0;
  const std::size_t n_min = std::min(n0, n1);
  const std::size_t n_maj = std::max(n0, n1);

  const auto target = static_cast<std::size_t>(std::llround(params.target_ratio * static_cast<double>(n_maj)));
  if (target <= n_min) return dataset;
  const std::size_t to_add = target - n_min;

  std::vector<std::size_t> minority_rows;
  for (std::size_t r = 0; r < dataset.rows(); ++r)
    if (dataset.labels[r] == minority) minority_rows.push_back(r);
  const Dataset minority_set = dataset.take_rows(minority_rows);
  const auto neighbors = minority_neighbors(minority_set.features, params.k_neighbors);

  const bool rounding = params.round_nominal && !params.nominal_columns.empty();
  if (rounding && params.nominal_columns.size() != dataset.cols())
    throw Error(Errc::LengthMismatch, "nominal_columns needs one flag per feature");

  Dataset out = dataset;
  const auto base_rows = static_cast<Eigen::Index>(dataset.rows());
  out.features.conservativeResize(base_rows + static_cast<Eigen::Index>(to_add), Eigen::NoChange);
  out.labels.resize(dataset.rows() + to_add, minority);
  out.synthetic.resize(dataset.rows() + to_add, true);

  Rng rng(params.seed);
  for (std::size_t s = 0; s < to_add; ++s) {
    const std::size_t base = s % n_min;
    const auto& candidates = neighbors[base];
    const std::size_t nn = candidates[rng.uniform_index(candidates.size())];
    const double gap = rng.uniform01();
    const auto x = minority_set.features.row(static_cast<Eigen::Index>(base));
    const auto z = minority_set.features.row(static_cast<Eigen::Index>(nn));
    auto dst = out.features.row(base_rows + static_cast<Eigen::Index>(s));
    for (Eigen::Index j = 0; j < dst.size(); ++j) {
      double v = std::clamp(x(j) + gap * (z(j) - x(j)), std::min(x(j), z(j)), std::max(x(j), z(j)));
      if (rounding && params.nominal_columns[static_cast<std::size_t>(j)]) v = std::round(v);
      dst(j) = v;
    }
  }
  return out;
}

}  // namespace chd
