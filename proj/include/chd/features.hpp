#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chd/dataset.hpp"
#include "chd/ingest.hpp"

namespace chd {

/// Equal-frequency bin codes. Cut points are the j/bins quantiles; equal
/// values always share a code and codes are compacted to 0..m-1 with
/// m <= min(bins, distinct values).
std::vector<int> discretize(std::span<const double> values, std::size_t bins);

/// Dense codes for the distinct values of a nominal or ordinal column.
std::vector<int> categorical_codes(std::span<const double> values);

/// Plug-in mutual information (nats) of the empirical joint of two code vectors.
double mutual_information(std::span<const int> x_codes, std::span<const int> y);

/// Plug-in entropy (nats) of one code vector.
double entropy(std::span<const int> codes);

struct FeatureScores {
  std::vector<std::string> names;
  std::vector<double> scores;

  /// One "Feature i: %.6f" line per predictor.
  std::string to_text() const;
  std::string to_json() const;
};

/// MI of each column against the labels. Columns whose kind is not
/// Continuous use their raw values as codes; empty `kinds` means all continuous.
FeatureScores score_features(const Dataset& dataset, std::size_t bins,
                             std::span<const FeatureKind> kinds = {});

struct SelectionResult {
  std::vector<std::size_t> selected;  // by descending score, ties by ascending index
  std::size_t k = 0;
};

/// Throws KOutOfRange unless 1 <= k <= number of scores.
SelectionResult select_k_best(const FeatureScores& scores, std::size_t k);

/// Keeps the selected columns in their original relative order.
Dataset apply_selection(const Dataset& dataset, const SelectionResult& selection);

}  // namespace chd
