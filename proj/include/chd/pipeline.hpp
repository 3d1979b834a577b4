#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chd/eval.hpp"
#include "chd/features.hpp"
#include "chd/ingest.hpp"
#include "chd/models.hpp"
#include "chd/preprocess.hpp"
#include "chd/resample.hpp"

namespace chd {

enum class CleaningStep { DropMissing, ImputeMean, RemoveOutliers };

struct GridSearchConfig {
  Algorithm algorithm = Algorithm::LR;
  Grid grid;
};

struct PipelineConfig {
  std::filesystem::path input_path;
  std::filesystem::path schema_path;  // empty = built-in Framingham schema
  std::uint64_t seed = 42;
  std::vector<std::string> drop_columns;
  std::vector<std::string> impute_columns;
  std::vector<std::string> outlier_columns;
  OutlierMethod outlier_method = OutlierMethod::Sigma;
  std::vector<CleaningStep> cleaning_order;
  std::size_t mi_bins = 10;
  std::size_t select_k = 0;  // 0 = keep every predictor
  SmoteMode smote_mode = SmoteMode::PaperFaithful;
  SmoteParams smote;
  std::vector<ClassifierSpec> algorithms;
  std::size_t cv_k = 10;
  double test_fraction = 0.2;
  std::optional<GridSearchConfig> grid_search;
  std::filesystem::path output_dir = "chd_out";
  std::size_t threads = 0;

  /// The configuration shipped with the tool.
  static PipelineConfig defaults();
  static std::string default_json();

  /// Missing keys take their default values. Throws ConfigError.
  static PipelineConfig from_json(std::string_view text);
  static PipelineConfig from_file(const std::filesystem::path& path);

  /// Resolved configuration; output_dir is omitted so the echo does not depend
  /// on where a run was written.
  std::string to_json() const;

  Schema schema() const;
  /// Throws ConfigError (or a grid error) before any data is read.
  void validate() const;
};

struct BoxplotStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

BoxplotStats five_number_summary(std::span<const double> values);

struct RunReport {
  std::string config_json;
  std::size_t raw_rows = 0;
  MissingReport missing;
  ClassBalance raw_balance;
  std::vector<std::pair<std::string, std::size_t>> rows_after_step;
  OutlierReport outliers;
  OutlierReport outliers_iqr_reference;  // same table, the other rule, for comparison
  std::vector<std::pair<std::string, ColumnStats>> column_stats;
  std::optional<Matrix> correlation;
  Dataset clean;
  ClassBalance clean_balance;
  FeatureScores feature_scores;
  SelectionResult selection;
  std::optional<ClassBalance> smote_balance;
  std::vector<EvalSummary> cv_original;
  std::vector<EvalSummary> cv_smote;
  std::optional<GridResult> grid;
  bool holdout_done = false;
  std::map<std::string, double> timings;  // seconds; written separately
  std::optional<CohortTable> clean_table;

  std::string to_json() const;
};

enum class Stage { Clean, ScoreFeatures, Evaluate, Run };

const char* to_string(Stage stage) noexcept;

/// Executes ingest, cleaning, feature scoring, resampling and evaluation up
/// to `stop_after`. Errors are rethrown with the failing stage named.
RunReport run_pipeline(const PipelineConfig& config, Stage stop_after = Stage::Run);

/// Writes the files produced by the stages reached:
/// clean: cleaned.csv, missing_report.json, outlier_report.json
/// score-features: feature_scores.txt, feature_scores.json
/// evaluate: cv_original.csv, cv_smote.csv, boxplot_stats.csv
/// run: holdout.csv, grid_search.csv
/// plus report.json and timings.json.
std::vector<std::filesystem::path> emit_tables(const RunReport& report, Stage reached,
                                               const std::filesystem::path& dir);

/// "Parameter,LR,..." table with Mean and Std rows.
std::string cv_table_csv(const std::vector<EvalSummary>& summaries);
/// "Data,LR,..." table with Original and Smote rows.
std::string holdout_table_csv(const std::vector<EvalSummary>& original,
                              const std::vector<EvalSummary>& smote);

}  // namespace chd
