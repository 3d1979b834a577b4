#include "chd/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"
#include "chd/preprocess.hpp"

namespace chd {

std::vector<int> discretize(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw Error(Errc::EmptyColumn, "discretize of empty column");
  if (bins == 0) throw Error(Errc::InvalidArgument, "bins must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> cuts;
  for (std::size_t j = 1; j < bins; ++j)
    cuts.push_back(quantile_sorted(sorted, static_cast<double>(j) / static_cast<double>(bins)));
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<int> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    raw[i] = static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), values[i]) - cuts.begin());

  // Compact away empty bins.
  std::vector<int> used(raw);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (int& code : raw)
    code = static_cast<int>(std::lower_bound(used.begin(), used.end(), code) - used.begin());
  return raw;
}

std::vector<int> categorical_codes(std::span<const double> values) {
  std::vector<double> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> codes(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    codes[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), values[i]) -
                                distinct.begin());
  return codes;
}

double mutual_information(std::span<const int> x_codes, std::span<const int> y) {
  if (x_codes.size() != y.size()) throw Error(Errc::LengthMismatch, "MI inputs differ in length");
  if (x_codes.empty()) throw Error(Errc::EmptyColumn, "MI of empty inputs");
  std::map<std::pair<int, int>, std::size_t> joint;
  std::map<int, std::size_t> px;
  std::map<int, std::size_t> py;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++joint[{x_codes[i], y[i]}];
    ++px[x_codes[i]];
    ++py[y[i]];
  }
  const double n = static_cast<double>(y.size());
  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    const double c = static_cast<double>(count);
    // p(x,y) / (p(x) p(y)) = c n / (n_x n_y)
    mi += c / n *
          std::log(c * n / (static_cast<double>(px[key.first]) * static_cast<double>(py[key.second])));
  }
  return std::max(mi, 0.0);
}

double entropy(std::span<const int> codes) {
  if (codes.empty()) throw Error(Errc::EmptyColumn, "entropy of empty input");
  std::map<int, std::size_t> counts;
  for (int c : codes) ++counts[c];
  const double n = static_cast<double>(codes.size());
  double h = 0.0;
  for (const auto& [code, count] : counts) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h;
}

std::string FeatureScores::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < scores.size(); ++i)
    out += "Feature " + std::to_string(i) + ": " + format_fixed(scores[i], 6) + "\n";
  return out;
}

std::string FeatureScores::to_json() const {
  auto doc = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["index"] = i;
    entry["name"] = i < names.size() ? names[i] : std::string();
    entry["score"] = scores[i];
    doc.push_back(entry);
  }
  return doc.dump(2);
}

FeatureScores score_features(const Dataset& dataset, std::size_t bins,
                             std::span<const FeatureKind> kinds) {
  if (dataset.rows() == 0) throw Error(Errc::EmptyColumn, "score_features on empty dataset");
  if (!kinds.empty() && kinds.size() != dataset.cols())
    throw Error(Errc::LengthMismatch, "one feature kind per column required");
  FeatureScores out;
  out.names = dataset.feature_names;
  for (std::size_t j = 0; j < dataset.cols(); ++j) {
    const auto values = dataset.column(j);
    const bool categorical = !kinds.empty() && kinds[j] != FeatureKind::Continuous;
    const auto codes = categorical ? categorical_codes(values) : discretize(values, bins);
    out.scores.push_back(mutual_information(codes, dataset.labels));
  }
  return out;
}

SelectionResult select_k_best(const FeatureScores& scores, std::size_t k) {
  const std::size_t d = scores.scores.size();
  if (k < 1 || k > d)
    throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(d) + " features");
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[a] > scores.scores[b];
  });
  order.resize(k);
  return {std::move(order), k};
}

Dataset apply_selection(const Dataset& dataset, const SelectionResult& selection) {
  auto columns = selection.selected;
  std::sort(columns.begin(), columns.end());
  return dataset.take_columns(columns);
}

}  // namespace chd
