#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chd/dataset.hpp"
#include "chd/ingest.hpp"

namespace chd {

struct ColumnStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) denominator; 0 when n == 1
  double min = 0.0;
  double max = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double skewness = 0.0;  // m3 / m2^1.5 with 1/n moments; 0 for constant columns
};

/// Quantile of already sorted values by linear interpolation at rank (n-1)p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws EmptyColumn.
ColumnStats column_stats(std::span<const double> values);

/// Fills absent cells of each named column with the mean of its present cells.
CohortTable impute_mean(const CohortTable& table, std::span<const std::string> columns);

/// Removes every row with an absent cell in any named column.
CohortTable drop_rows_missing(const CohortTable& table, std::span<const std::string> columns);

enum class OutlierMethod { IQR, Sigma };

const char* to_string(OutlierMethod method) noexcept;
OutlierMethod outlier_method_from_string(std::string_view text);

/// x > Q3 + 1.5 IQR or x < Q1 - 1.5 IQR. Needs n >= 4.
std::vector<bool> iqr_outlier_mask(std::span<const double> values);

/// |x - mean| > 3 s with s the sample standard deviation. Needs n >= 2.
std::vector<bool> sigma_outlier_mask(std::span<const double> values);

std::vector<bool> outlier_mask(std::span<const double> values, OutlierMethod method);

struct OutlierReport {
  OutlierMethod method = OutlierMethod::Sigma;
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::size_t total = 0;
  std::size_t rows_removed = 0;

  std::size_t count(std::string_view name) const;
  std::string to_json() const;
};

/// Flags cells of each named column with statistics of the input table
/// (single pass), then drops every row holding at least one flagged cell.
/// Missing cells are never flagged.
std::pair<CohortTable, OutlierReport> remove_outliers(const CohortTable& table,
                                                      OutlierMethod method,
                                                      std::span<const std::string> columns);

/// Pearson correlation matrix of the feature columns. Throws ZeroVarianceColumn.
Matrix pearson_correlation(const Dataset& dataset);

/// Per-column mean and sample standard deviation fitted on a training set.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  /// Throws ZeroVarianceColumn unless constant columns are allowed, in which
  /// case they are only centered (scale 1).
  static Standardizer fit(const Dataset& train, bool allow_constant = false);
  Dataset apply(const Dataset& data) const;
};

/// (x - mean_train) / std_train applied to every column of apply_to.
Dataset standardize(const Dataset& train, const Dataset& apply_to);

}  // namespace chd
