#include "chd/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "chd/error.hpp"

namespace chd {

Dataset::Dataset(Matrix x, std::vector<int> y, std::vector<std::string> names)
    : features(std::move(x)), labels(std::move(y)), feature_names(std::move(names)),
      synthetic(labels.size(), false) {
  validate();
}

std::vector<double> Dataset::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = features(r, c);
  return out;
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::take_rows(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.reserve(indices.size());
  out.synthetic.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto r = indices[i];
    if (r >= rows()) throw Error(Errc::InvalidArgument, "row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(r));
    out.labels.push_back(labels[r]);
    out.synthetic.push_back(synthetic[r]);
  }
  out.feature_names = feature_names;
  return out;
}

Dataset Dataset::take_columns(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features.resize(features.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= cols()) throw Error(Errc::InvalidArgument, "column index out of range");
    out.features.col(static_cast<Eigen::Index>(j)) =
        features.col(static_cast<Eigen::Index>(indices[j]));
    out.feature_names.push_back(feature_names[indices[j]]);
  }
  out.labels = labels;
  out.synthetic = synthetic;
  return out;
}

void Dataset::validate() const {
  if (labels.size() != rows()) throw Error(Errc::LengthMismatch, "labels vs rows");
  if (synthetic.size() != rows()) throw Error(Errc::LengthMismatch, "synthetic flags vs rows");
  if (feature_names.size() != cols()) throw Error(Errc::LengthMismatch, "feature names vs columns");
  for (int y : labels)
    if (y != 0 && y != 1) throw Error(Errc::InvalidValue, "labels must be 0 or 1");
  for (Eigen::Index i = 0; i < features.size(); ++i)
    if (std::isnan(features.data()[i])) throw Error(Errc::MissingValue, "NaN in feature matrix");
}

Dataset to_dataset(const CohortTable& table) {
  const auto& schema = table.schema();
  const auto predictors = schema.predictor_indices();
  Matrix x(static_cast<Eigen::Index>(table.row_count()),
           static_cast<Eigen::Index>(predictors.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    const auto& col = table.column(predictors[j]);
    names.push_back(schema[predictors[j]].name);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      if (!col[r])
        throw Error(Errc::MissingValue, "column " + names.back() + " row " + std::to_string(r + 1));
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *col[r];
    }
  }
  std::vector<int> y;
  y.reserve(table.row_count());
  for (const auto& cell : table.column(schema.target_index())) y.push_back(static_cast<int>(*cell));
  return Dataset(std::move(x), std::move(y), std::move(names));
}

}  // namespace chd
