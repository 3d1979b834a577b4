#include "chd/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"

namespace chd {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(Errc::EmptyColumn, "quantile of empty column");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ColumnStats column_stats(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyColumn, "column_stats of empty column");
  ColumnStats s;
  s.n = values.size();
  const double n = static_cast<double>(s.n);

  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;

  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  s.std = s.n > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
  m2 /= n;
  m3 /= n;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

CohortTable impute_mean(const CohortTable& table, std::span<const std::string> columns) {
  CohortTable out = table;
  for (const auto& name : columns) {
    const std::size_t c = table.schema().index_of(name);
    const auto present = out.present_values(c);
    if (present.empty()) throw Error(Errc::AllMissingColumn, name);
    if (present.size() == out.row_count()) continue;
    double sum = 0.0;
    for (double v : present) sum += v;
    const double mean = sum / static_cast<double>(present.size());
    Column filled = out.column(c);
    for (auto& cell : filled)
      if (!cell) cell = mean;
    out = out.with_column(c, std::move(filled));
  }
  return out;
}

CohortTable drop_rows_missing(const CohortTable& table, std::span<const std::string> columns) {
  std::vector<bool> keep(table.row_count(), true);
  for (const auto& name : columns) {
    const auto& col = table.column(table.schema().index_of(name));
    for (std::size_t r = 0; r < col.size(); ++r)
      if (!col[r]) keep[r] = false;
  }
  return table.filter_rows(keep);
}

const char* to_string(OutlierMethod method) noexcept {
  return method == OutlierMethod::IQR ? "IQR" : "Sigma";
}

OutlierMethod outlier_method_from_string(std::string_view text) {
  const auto key = to_lower(trim(text));
  if (key == "iqr") return OutlierMethod::IQR;
  if (key == "sigma") return OutlierMethod::Sigma;
  throw Error(Errc::ConfigError, "unknown outlier method '" + std::string(text) + "'");
}

std::vector<bool> iqr_outlier_mask(std::span<const double> values) {
  if (values.size() < 4) throw Error(Errc::TooFewValues, "IQR rule needs at least 4 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);
  const double q3 = quantile_sorted(sorted, 0.75);
  const double iqr = q3 - q1;
  const double upper = q3 + 1.5 * iqr;
  const double lower = q1 - 1.5 * iqr;
  std::vector<bool> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] > upper || values[i] < lower;
  return mask;
}

std::vector<bool> sigma_outlier_mask(std::span<const double> values) {
  if (values.size() < 2) throw Error(Errc::TooFewValues, "sigma rule needs at least 2 values");
  const auto stats = column_stats(values);
  const double limit = 3.0 * stats.std;
  std::vector<bool> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    mask[i] = std::abs(values[i] - stats.mean) > limit;
  return mask;
}

std::vector<bool> outlier_mask(std::span<const double> values, OutlierMethod method) {
  return method == OutlierMethod::IQR ? iqr_outlier_mask(values) : sigma_outlier_mask(values);
}

std::size_t OutlierReport::count(std::string_view name) const {
  const auto key = to_lower(name);
  for (const auto& [col, n] : counts)
    if (to_lower(col) == key) return n;
  throw Error(Errc::UnknownColumn, std::string(name));
}

std::string OutlierReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["method"] = to_string(method);
  auto& cols = doc["columns"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : counts) cols[name] = n;
  doc["total"] = total;
  doc["rows_removed"] = rows_removed;
  return doc.dump(2);
}

std::pair<CohortTable, OutlierReport> remove_outliers(const CohortTable& table,
                                                      OutlierMethod method,
                                                      std::span<const std::string> columns) {
  OutlierReport report;
  report.method = method;
  std::vector<bool> keep(table.row_count(), true);
  for (const auto& name : columns) {
    const std::size_t c = table.schema().index_of(name);
    const auto& col = table.column(c);
    std::vector<std::size_t> rows;
    std::vector<double> values;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (col[r]) {
        rows.push_back(r);
        values.push_back(*col[r]);
      }
    }
    const auto mask = outlier_mask(values, method);
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) {
        ++flagged;
        keep[rows[i]] = false;
      }
    }
    report.counts.emplace_back(table.schema()[c].name, flagged);
    report.total += flagged;
  }
  report.rows_removed = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), false));
  return {table.filter_rows(keep), std::move(report)};
}

Matrix pearson_correlation(const Dataset& dataset) {
  const auto d = static_cast<Eigen::Index>(dataset.cols());
  const auto n = static_cast<double>(dataset.rows());
  Matrix centered = dataset.features;
  std::vector<double> norms(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = centered.col(j).sum() / n;
    centered.col(j).array() -= mean;
    norms[static_cast<std::size_t>(j)] = centered.col(j).norm();
    if (!(norms[static_cast<std::size_t>(j)] > 0.0))
      throw Error(Errc::ZeroVarianceColumn, dataset.feature_names[static_cast<std::size_t>(j)]);
  }
  Matrix corr(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    corr(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < d; ++b) {
      double r = centered.col(a).dot(centered.col(b)) /
                 (norms[static_cast<std::size_t>(a)] * norms[static_cast<std::size_t>(b)]);
      r = std::clamp(r, -1.0, 1.0);
      corr(a, b) = corr(b, a) = r;
    }
  }
  return corr;
}

Standardizer Standardizer::fit(const Dataset& train, bool allow_constant) {
  Standardizer s;
  for (std::size_t j = 0; j < train.cols(); ++j) {
    const auto stats = column_stats(train.column(j));
    double scale = stats.std;
    if (!(scale > 0.0)) {
      if (!allow_constant) throw Error(Errc::ZeroVarianceColumn, train.feature_names[j]);
      scale = 1.0;
    }
    s.mean.push_back(stats.mean);
    s.scale.push_back(scale);
  }
  return s;
}

Dataset Standardizer::apply(const Dataset& data) const {
  if (data.cols() != mean.size()) throw Error(Errc::DimensionMismatch, "standardizer width");
  Dataset out = data;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    auto col = out.features.col(static_cast<Eigen::Index>(j));
    col = (col.array() - mean[j]) / scale[j];
  }
  return out;
}

Dataset standardize(const Dataset& train, const Dataset& apply_to) {
  return Standardizer::fit(train).apply(apply_to);
}

}  // namespace chd
