#include "chd/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"

namespace chd {

const char* to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::BinaryNominal: return "BinaryNominal";
    case FeatureKind::Ordinal: return "Ordinal";
    case FeatureKind::Continuous: return "Continuous";
  }
  return "Continuous";
}

FeatureKind feature_kind_from_string(std::string_view text) {
  const std::string key = to_lower(trim(text));
  if (key == "binarynominal" || key == "binary" || key == "nominal") return FeatureKind::BinaryNominal;
  if (key == "ordinal") return FeatureKind::Ordinal;
  if (key == "continuous") return FeatureKind::Continuous;
  throw Error(Errc::SchemaError, "unknown feature kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Schema

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::size_t targets = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& c = columns_[i];
    if (c.name.empty()) throw Error(Errc::SchemaError, "column with empty name");
    if (c.is_target) {
      ++targets;
      target_ = i;
      if (c.kind != FeatureKind::BinaryNominal)
        throw Error(Errc::SchemaError, "target '" + c.name + "' must be BinaryNominal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (to_lower(columns_[j].name) == to_lower(c.name))
        throw Error(Errc::DuplicateColumn, c.name);
    }
  }
  if (targets != 1) throw Error(Errc::SchemaError, "schema needs exactly one target column");
  if (columns_.size() < 2) throw Error(Errc::SchemaError, "schema needs at least one predictor");
}

Schema Schema::framingham() {
  using K = FeatureKind;
  auto col = [](std::string name, K kind, bool target = false) {
    ColumnSpec c;
    c.name = std::move(name);
    c.kind = kind;
    c.is_target = target;
    return c;
  };
  std::vector<ColumnSpec> cols = {
      col("sex", K::BinaryNominal),
      col("age", K::Continuous),
      col("education", K::Ordinal),
      col("currentSmoker", K::BinaryNominal),
      col("cigsPerDay", K::Continuous),
      col("BPMeds", K::BinaryNominal),
      col("prevalentStroke", K::BinaryNominal),
      col("prevalentHyp", K::BinaryNominal),
      col("diabetes", K::BinaryNominal),
      col("totChol", K::Continuous),
      col("sysBP", K::Continuous),
      col("diaBP", K::Continuous),
      col("BMI", K::Continuous),
      col("heartRate", K::Continuous),
      col("glucose", K::Continuous),
      col("TenYearCHD", K::BinaryNominal, true),
  };
  cols[0].aliases = {"male"};
  cols[2].min_value = 1.0;
  cols[2].max_value = 4.0;
  return Schema(std::move(cols));
}

Schema Schema::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("invalid schema JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::SchemaError, "schema JSON must be an array");
  std::vector<ColumnSpec> cols;
  try {
    for (const auto& entry : doc) {
      ColumnSpec c;
      c.name = entry.at("name").get<std::string>();
      c.kind = feature_kind_from_string(entry.at("kind").get<std::string>());
      c.is_target = entry.value("target", false);
      if (entry.contains("min")) c.min_value = entry["min"].get<double>();
      if (entry.contains("max")) c.max_value = entry["max"].get<double>();
      if (entry.contains("aliases")) c.aliases = entry["aliases"].get<std::vector<std::string>>();
      cols.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("malformed schema entry: ") + e.what());
  }
  return Schema(std::move(cols));
}

Schema Schema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open schema file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::vector<std::size_t> Schema::predictor_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (!columns_[i].is_target) out.push_back(i);
  return out;
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  const std::string key = to_lower(name);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (to_lower(columns_[i].name) == key) return i;
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (const auto& alias : columns_[i].aliases)
      if (to_lower(alias) == key) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  auto idx = find(name);
  if (!idx) throw Error(Errc::UnknownColumn, std::string(name));
  return *idx;
}

// ---------------------------------------------------------------------------
// CohortTable

CohortTable::CohortTable(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size())
    throw Error(Errc::LengthMismatch, "column count does not match schema");
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (const auto& c : columns_)
    if (c.size() != rows_) throw Error(Errc::LengthMismatch, "ragged columns");
  const auto& target = columns_[schema_.target_index()];
  for (std::size_t r = 0; r < rows_; ++r) {
    if (!target[r])
      throw Error(Errc::MissingTarget, "row " + std::to_string(r + 1) + " has no target value");
  }
}

std::vector<double> CohortTable::present_values(std::size_t i) const {
  std::vector<double> out;
  out.reserve(rows_);
  for (const auto& cell : columns_[i])
    if (cell) out.push_back(*cell);
  return out;
}

CohortTable CohortTable::filter_rows(const std::vector<bool>& keep) const {
  if (keep.size() != rows_) throw Error(Errc::LengthMismatch, "row mask length");
  std::vector<Column> cols(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    cols[c].reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (keep[r]) cols[c].push_back(columns_[c][r]);
  }
  return CohortTable(schema_, std::move(cols));
}

CohortTable CohortTable::with_column(std::size_t i, Column replacement) const {
  auto cols = columns_;
  cols.at(i) = std::move(replacement);
  return CohortTable(schema_, std::move(cols));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

bool is_missing_token(std::string_view text) {
  text = trim(text);
  return text.empty() || to_lower(text) == "na";
}

void check_kind(const ColumnSpec& spec, double v, std::size_t row, std::string_view text) {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::InvalidValue, "row " + std::to_string(row) + ", column " + spec.name +
                                        ": '" + std::string(text) + "' " + why);
  };
  switch (spec.kind) {
    case FeatureKind::BinaryNominal:
      if (v != 0.0 && v != 1.0) {
        if (spec.is_target)
          throw Error(Errc::NonBinaryTarget, "row " + std::to_string(row) + ": '" +
                                                 std::string(text) + "'");
        fail("is not 0 or 1");
      }
      break;
    case FeatureKind::Ordinal:
      if (v != std::floor(v)) fail("is not an integer");
      if ((spec.min_value && v < *spec.min_value) || (spec.max_value && v > *spec.max_value))
        fail("is outside the ordinal range");
      break;
    case FeatureKind::Continuous:
      break;
  }
}

}  // namespace

CohortTable parse_csv(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::SchemaError, "missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  // position in file -> schema index
  std::vector<std::size_t> mapping(header.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t h = 0; h < header.size(); ++h) {
    const std::string name(trim(header[h]));
    auto idx = schema.find(name);
    if (!idx) throw Error(Errc::UnknownColumn, "unexpected header '" + name + "'");
    if (seen[*idx]) throw Error(Errc::DuplicateColumn, name);
    seen[*idx] = true;
    mapping[h] = *idx;
  }
  for (std::size_t i = 0; i < schema.size(); ++i)
    if (!seen[i]) throw Error(Errc::MissingColumn, schema[i].name);

  std::vector<Column> columns(schema.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw Error(Errc::UnparseableCell, "row " + std::to_string(row) + " has " +
                                             std::to_string(fields.size()) + " fields, expected " +
                                             std::to_string(header.size()));
    for (std::size_t h = 0; h < fields.size(); ++h) {
      const auto& spec = schema[mapping[h]];
      Cell cell;
      if (!is_missing_token(fields[h])) {
        auto v = parse_real(fields[h]);
        if (!v || !std::isfinite(*v))
          throw Error(Errc::UnparseableCell, "row " + std::to_string(row) + ", column " +
                                                 spec.name + ": '" + fields[h] + "'");
        check_kind(spec, *v, row, fields[h]);
        cell = *v;
      }
      columns[mapping[h]].push_back(cell);
    }
  }
  return CohortTable(schema, std::move(columns));
}

CohortTable load_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const CohortTable& table) {
  const auto& schema = table.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) out << (c ? "," : "") << schema[c].name;
  out << '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c) out << ',';
      const auto& cell = table.column(c)[r];
      out << (cell ? format_real(*cell) : std::string("NA"));
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const CohortTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  write_csv(out, table);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Reports

std::size_t MissingReport::count(std::string_view name) const {
  const std::string key = to_lower(name);
  for (const auto& [col, n] : counts)
    if (to_lower(col) == key) return n;
  throw Error(Errc::UnknownColumn, std::string(name));
}

std::size_t MissingReport::total() const {
  std::size_t sum = 0;
  for (const auto& entry : counts) sum += entry.second;
  return sum;
}

std::string MissingReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["method"] = "missing";
  auto& cols = doc["columns"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : counts) cols[name] = n;
  doc["total"] = total();
  return doc.dump(2);
}

MissingReport missing_report(const CohortTable& table) {
  MissingReport report;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto& col = table.column(c);
    const auto absent = static_cast<std::size_t>(
        std::count_if(col.begin(), col.end(), [](const Cell& v) { return !v.has_value(); }));
    report.counts.emplace_back(table.schema()[c].name, absent);
  }
  return report;
}

ClassBalance class_balance(const CohortTable& table) {
  ClassBalance balance;
  for (const auto& cell : table.column(table.schema().target_index())) {
    if (*cell == 0.0) {
      ++balance.negatives;
    } else if (*cell == 1.0) {
      ++balance.positives;
    } else {
      throw Error(Errc::NonBinaryTarget, format_real(*cell));
    }
  }
  return balance;
}

}  // namespace chd
