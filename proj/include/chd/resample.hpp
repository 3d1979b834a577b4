#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chd/dataset.hpp"

namespace chd {

struct SmoteParams {
  std::size_t k_neighbors = 5;
  double target_ratio = 1.0;  // minority / majority after resampling
  std::uint64_t seed = 0;
  // Round synthetic values of the flagged columns to 0/1.
  bool round_nominal = false;
  std::vector<bool> nominal_columns;

  void validate() const;
};

/// For each row, the min(k, n-1) nearest other rows by Euclidean distance,
/// ties broken by ascending row index. Throws TooFewMinority when n < 2.
std::vector<std::vector<std::size_t>> minority_neighbors(const Matrix& points, std::size_t k);

/// Appends synthetic minority rows x + u (x_nn - x) until the minority count
/// reaches round(target_ratio * majority count). Bases cycle through the
/// minority rows in index order; the neighbor and the gap u in [0, 1) come
/// from one generator seeded with params.seed. Original rows are kept as a
/// prefix and synthetic rows are flagged.
Dataset smote(const Dataset& dataset, const SmoteParams& params);

}  // namespace chd
