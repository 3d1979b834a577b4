#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chd {

enum class FeatureKind { BinaryNominal, Ordinal, Continuous };

const char* to_string(FeatureKind kind) noexcept;
FeatureKind feature_kind_from_string(std::string_view text);

struct ColumnSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  bool is_target = false;
  // Inclusive range for Ordinal columns.
  std::optional<double> min_value;
  std::optional<double> max_value;
  // Alternative header spellings accepted on input, e.g. "male" for "sex".
  std::vector<std::string> aliases;
};

/// Ordered column list with exactly one BinaryNominal target.
class Schema {
 public:
  explicit Schema(std::vector<ColumnSpec> columns);

  /// The 16-column Framingham layout: 15 predictors in fixed order, then TenYearCHD.
  static Schema framingham();

  /// JSON array of {"name", "kind", "target"} plus optional "min", "max", "aliases".
  static Schema from_json(std::string_view text);
  static Schema from_json_file(const std::filesystem::path& path);

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return columns_.size(); }
  const ColumnSpec& operator[](std::size_t i) const { return columns_[i]; }

  std::size_t target_index() const noexcept { return target_; }
  /// Column indices of the predictors in schema order.
  std::vector<std::size_t> predictor_indices() const;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownColumn.
  std::size_t index_of(std::string_view name) const;

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t target_ = 0;
};

using Cell = std::optional<double>;
using Column = std::vector<Cell>;

/// Column-oriented raw table; absent cells are missing values.
class CohortTable {
 public:
  CohortTable(Schema schema, std::vector<Column> columns);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t row_count() const noexcept { return rows_; }
  std::size_t column_count() const noexcept { return columns_.size(); }

  const Column& column(std::size_t i) const { return columns_[i]; }
  const Column& column(std::string_view name) const { return columns_[schema_.index_of(name)]; }
  const std::vector<Column>& columns() const noexcept { return columns_; }

  /// Present values of one column, in row order.
  std::vector<double> present_values(std::size_t i) const;

  /// Copy keeping only rows whose keep[r] is true.
  CohortTable filter_rows(const std::vector<bool>& keep) const;
  CohortTable with_column(std::size_t i, Column replacement) const;

  friend bool operator==(const CohortTable& a, const CohortTable& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Parses CSV text. Headers are matched to the schema by name or alias,
/// case-insensitively; empty cells and NA are missing.
CohortTable parse_csv(std::istream& in, const Schema& schema);
CohortTable load_csv(const std::filesystem::path& path, const Schema& schema);

/// Writes the table in schema order; missing cells are written as NA and
/// reals in shortest round-trip form.
void write_csv(std::ostream& out, const CohortTable& table);
void save_csv(const std::filesystem::path& path, const CohortTable& table);

struct MissingReport {
  std::vector<std::pair<std::string, std::size_t>> counts;

  std::size_t count(std::string_view name) const;
  std::size_t total() const;
  std::string to_json() const;
};

MissingReport missing_report(const CohortTable& table);

struct ClassBalance {
  std::size_t negatives = 0;
  std::size_t positives = 0;

  friend bool operator==(const ClassBalance&, const ClassBalance&) = default;
};

/// Throws NonBinaryTarget when a target cell is not 0 or 1.
ClassBalance class_balance(const CohortTable& table);

}  // namespace chd
