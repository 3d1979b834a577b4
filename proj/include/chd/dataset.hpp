#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chd/ingest.hpp"

namespace chd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Dense, complete feature matrix with binary labels.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  // One flag per row; set for rows created by oversampling.
  std::vector<bool> synthetic;

  Dataset() = default;
  Dataset(Matrix x, std::vector<int> y, std::vector<std::string> names);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(features.cols()); }

  std::span<const double> row(std::size_t r) const {
    return {features.data() + r * cols(), cols()};
  }
  std::vector<double> column(std::size_t c) const;

  std::size_t count_label(int label) const;

  /// Rows in the given order (duplicates allowed).
  Dataset take_rows(std::span<const std::size_t> indices) const;
  /// Columns in the given order.
  Dataset take_columns(std::span<const std::size_t> indices) const;

  /// Throws MissingValue, LengthMismatch or InvalidValue if invariants fail.
  void validate() const;
};

/// Predictor matrix (schema order) and target labels. Throws MissingValue
/// when any cell is absent.
Dataset to_dataset(const CohortTable& table);

}  // namespace chd
