#include "chd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chd/error.hpp"
#include "chd/format.hpp"
#include "chd/random.hpp"

namespace chd {

using ojson = nlohmann::ordered_json;

namespace {

// Stream indices under the master seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kSmoteStream = 2;
constexpr std::uint64_t kModelStreamBase = 10;

const char* kDefaultConfig = R"json({
  "input_path": "",
  "schema_path": "",
  "seed": 42,
  "drop_columns": ["BPMeds", "education"],
  "impute_columns": ["cigsPerDay", "totChol", "BMI", "heartRate", "glucose"],
  "outlier_columns": ["cigsPerDay", "totChol", "sysBP", "diaBP", "BMI", "heartRate", "glucose"],
  "outlier_method": "sigma",
  "cleaning_order": ["drop", "impute", "outliers"],
  "mi_bins": 10,
  "select_k": 0,
  "smote_mode": "paper-faithful",
  "smote": {"k_neighbors": 5, "target_ratio": 1.0, "round_nominal": false},
  "algorithms": ["LR", "KNN", "CART", "NB", "SVM", "RF"],
  "cv_k": 10,
  "test_fraction": 0.2,
  "grid_search": {
    "algorithm": "LR",
    "grid": {"lambda": [0.01, 0.1, 1.0, 10.0, 100.0], "step": [0.05, 0.1, 0.5]}
  },
  "output_dir": "chd_out",
  "threads": 0,
  "notes": {
    "input_path": "Empty means: read the path from the CHD_DATA environment variable.",
    "seed": "Every random stream (folds, split, SMOTE, forests) is derived from this one value.",
    "drop_columns": "Rows missing these categorical/ordinal values are removed rather than imputed.",
    "impute_columns": "Missing values are replaced by the column mean of the present values.",
    "outlier_method": "sigma flags |x - mean| > 3 s (two-sided); iqr flags beyond 1.5 IQR outside the quartiles. Statistics come from the table before removal, in one pass.",
    "cleaning_order": "Drop, then impute, then remove outliers; any order of the three steps is allowed.",
    "mi_bins": "Continuous predictors are cut into equal-frequency bins before the plug-in mutual information estimate; binary and ordinal predictors use their raw values.",
    "select_k": "0 keeps every predictor in the models.",
    "smote_mode": "paper-faithful oversamples the whole cleaned dataset before folds and the hold-out split are drawn, which reproduces the reference tables; leakage-free oversamples training portions only; none disables the balanced tables.",
    "smote": "k nearest minority neighbours, one interpolation gap per synthetic row, minority grown to target_ratio times the majority.",
    "algorithms": "Default hyper-parameters: LR lambda 1, step 0.1, 1000 iterations; KNN k 5; CART min_samples_split 2; NB var_smoothing 1e-9; SVM RBF C 1, gamma 1/(d * mean feature variance); RF 100 trees, floor(sqrt(d)) features per split. LR, KNN and SVM see standardized features.",
    "cv_k": "Stratified k-fold cross-validation scored by ROC-AUC.",
    "test_fraction": "Stratified hold-out split; 0.2 gives an 80:20 split.",
    "grid_search": "Cross-validated search on the original (not oversampled) cleaned data; the first axis varies slowest."
  }
})json";

std::vector<std::string> string_list(const ojson& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw Error(Errc::ConfigError, std::string(key) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.get<std::string>());
  return out;
}

CleaningStep cleaning_step_from_string(std::string_view text) {
  const auto key = to_lower(text);
  if (key == "drop") return CleaningStep::DropMissing;
  if (key == "impute") return CleaningStep::ImputeMean;
  if (key == "outliers") return CleaningStep::RemoveOutliers;
  throw Error(Errc::ConfigError, "unknown cleaning step '" + std::string(text) + "'");
}

const char* to_string(CleaningStep step) noexcept {
  switch (step) {
    case CleaningStep::DropMissing: return "drop";
    case CleaningStep::ImputeMean: return "impute";
    case CleaningStep::RemoveOutliers: return "outliers";
  }
  return "drop";
}

Hyperparameters hyperparameters_from(const ojson& j) {
  Hyperparameters hp;
  if (!j.is_object()) throw Error(Errc::ConfigError, "hyperparameters must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(Errc::ConfigError, "hyperparameter " + k + " must be a number");
    hp[k] = v.get<double>();
  }
  return hp;
}

}  // namespace

// ---------------------------------------------------------------------------
// PipelineConfig

PipelineConfig PipelineConfig::defaults() { return from_json(kDefaultConfig); }

std::string PipelineConfig::default_json() { return kDefaultConfig; }

PipelineConfig PipelineConfig::from_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::ConfigError, "config must be a JSON object");
  static const char* known[] = {"input_path", "schema_path", "seed", "drop_columns", "impute_columns",
                                "outlier_columns", "outlier_method", "cleaning_order", "mi_bins",
                                "select_k", "smote_mode", "smote", "algorithms", "cv_k",
                                "test_fraction", "grid_search", "output_dir", "threads", "notes"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known))
      throw Error(Errc::ConfigError, "unknown config key '" + key + "'");
  }

  // Start from the shipped defaults unless this is the defaults document itself.
  ojson base = text == kDefaultConfig ? doc : ojson::parse(kDefaultConfig);
  for (const auto& [key, value] : doc.items()) base[key] = value;

  PipelineConfig c;
  try {
    c.input_path = base.at("input_path").get<std::string>();
    c.schema_path = base.at("schema_path").get<std::string>();
    const auto& seed = base.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
      throw Error(Errc::ConfigError, "seed must be a non-negative integer");
    c.seed = seed.get<std::uint64_t>();
    c.drop_columns = string_list(base, "drop_columns");
    c.impute_columns = string_list(base, "impute_columns");
    c.outlier_columns = string_list(base, "outlier_columns");
    c.outlier_method = outlier_method_from_string(base.at("outlier_method").get<std::string>());
    for (const auto& step : string_list(base, "cleaning_order"))
      c.cleaning_order.push_back(cleaning_step_from_string(step));
    c.mi_bins = base.at("mi_bins").get<std::size_t>();
    c.select_k = base.at("select_k").get<std::size_t>();
    c.smote_mode = smote_mode_from_string(base.at("smote_mode").get<std::string>());
    const auto& sm = base.at("smote");
    c.smote.k_neighbors = sm.value("k_neighbors", std::size_t{5});
    c.smote.target_ratio = sm.value("target_ratio", 1.0);
    c.smote.round_nominal = sm.value("round_nominal", false);
    for (const auto& entry : base.at("algorithms")) {
      if (entry.is_string()) {
        c.algorithms.emplace_back(algorithm_from_string(entry.get<std::string>()));
      } else {
        const auto algorithm = algorithm_from_string(entry.at("algorithm").get<std::string>());
        Hyperparameters hp;
        if (entry.contains("hyperparameters")) hp = hyperparameters_from(entry["hyperparameters"]);
        c.algorithms.emplace_back(algorithm, hp);
      }
    }
    c.cv_k = base.at("cv_k").get<std::size_t>();
    c.test_fraction = base.at("test_fraction").get<double>();
    const auto& gs = base.at("grid_search");
    if (!gs.is_null()) {
      GridSearchConfig g;
      g.algorithm = algorithm_from_string(gs.at("algorithm").get<std::string>());
      for (const auto& [name, values] : gs.at("grid").items())
        g.grid.emplace_back(name, values.get<std::vector<double>>());
      c.grid_search = std::move(g);
    }
    c.output_dir = base.at("output_dir").get<std::string>();
    c.threads = base.at("threads").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("malformed config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string PipelineConfig::to_json() const {
  ojson doc;
  doc["input_path"] = input_path.string();
  doc["schema_path"] = schema_path.string();
  doc["seed"] = seed;
  doc["drop_columns"] = drop_columns;
  doc["impute_columns"] = impute_columns;
  doc["outlier_columns"] = outlier_columns;
  doc["outlier_method"] = to_lower(to_string(outlier_method));
  auto& order = doc["cleaning_order"] = ojson::array();
  for (auto step : cleaning_order) order.push_back(to_string(step));
  doc["mi_bins"] = mi_bins;
  doc["select_k"] = select_k;
  doc["smote_mode"] = to_string(smote_mode);
  doc["smote"] = {{"k_neighbors", smote.k_neighbors},
                  {"target_ratio", smote.target_ratio},
                  {"round_nominal", smote.round_nominal}};
  auto& algos = doc["algorithms"] = ojson::array();
  for (const auto& spec : algorithms)
    algos.push_back({{"algorithm", to_string(spec.algorithm())},
                     {"hyperparameters", ojson(spec.hyperparameters())}});
  doc["cv_k"] = cv_k;
  doc["test_fraction"] = test_fraction;
  if (grid_search) {
    ojson grid = ojson::object();
    for (const auto& [name, values] : grid_search->grid) grid[name] = values;
    doc["grid_search"] = {{"algorithm", to_string(grid_search->algorithm)}, {"grid", grid}};
  } else {
    doc["grid_search"] = nullptr;
  }
  doc["threads"] = threads;
  return doc.dump(2);
}

Schema PipelineConfig::schema() const {
  return schema_path.empty() ? Schema::framingham() : Schema::from_json_file(schema_path);
}

void PipelineConfig::validate() const {
  const Schema s = schema();
  auto check = [&](const std::vector<std::string>& names, const char* field) {
    for (const auto& n : names)
      if (!s.find(n)) throw Error(Errc::ConfigError, std::string(field) + ": unknown column '" + n + "'");
  };
  check(drop_columns, "drop_columns");
  check(impute_columns, "impute_columns");
  check(outlier_columns, "outlier_columns");
  if (cv_k < 2) throw Error(Errc::ConfigError, "cv_k must be >= 2");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(Errc::ConfigError, "test_fraction must be in (0, 1)");
  if (mi_bins < 1) throw Error(Errc::ConfigError, "mi_bins must be >= 1");
  if (select_k > s.size() - 1) throw Error(Errc::ConfigError, "select_k exceeds the number of predictors");
  if (algorithms.empty()) throw Error(Errc::ConfigError, "no algorithms configured");
  if (smote.k_neighbors < 1 || !(smote.target_ratio > 0.0))
    throw Error(Errc::ConfigError, "smote.k_neighbors must be >= 1 and target_ratio > 0");
  if (grid_search) {
    if (grid_search->grid.empty()) throw Error(Errc::EmptyGrid, "grid_search.grid is empty");
    const ClassifierSpec probe(grid_search->algorithm);
    for (const auto& [name, values] : grid_search->grid) {
      probe.get(name);
      if (values.empty()) throw Error(Errc::EmptyGrid, "grid axis '" + name + "' is empty");
    }
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (algorithms[i].algorithm() == algorithms[j].algorithm())
        throw Error(Errc::ConfigError, std::string("algorithm listed twice: ") + chd::to_string(algorithms[i].algorithm()));
}

// ---------------------------------------------------------------------------
// Reports

BoxplotStats five_number_summary(std::span<const double> values) {
  const auto s = column_stats(values);
  return {s.min, s.q1, s.median, s.q3, s.max};
}

const char* to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Clean: return "clean";
    case Stage::ScoreFeatures: return "score-features";
    case Stage::Evaluate: return "evaluate";
    case Stage::Run: return "run";
  }
  return "run";
}

namespace {

ojson balance_json(const ClassBalance& b) {
  return {{"negatives", b.negatives}, {"positives", b.positives}};
}

ojson counts_json(const std::vector<std::pair<std::string, std::size_t>>& counts) {
  ojson out = ojson::object();
  for (const auto& [name, n] : counts) out[name] = n;
  return out;
}

ojson outliers_json(const OutlierReport& r) {
  return {{"method", to_string(r.method)}, {"columns", counts_json(r.counts)},
          {"total", r.total}, {"rows_removed", r.rows_removed}};
}

ojson summary_json(const EvalSummary& s) {
  ojson doc = ojson::parse(s.to_json());
  const auto box = five_number_summary(s.fold_aucs);
  doc["fold_auc_summary"] = {{"min", box.min}, {"q1", box.q1}, {"median", box.median},
                             {"q3", box.q3}, {"max", box.max}};
  return doc;
}

template <typename F>
auto in_stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.message());
  }
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string RunReport::to_json() const {
  ojson doc;
  doc["config"] = ojson::parse(config_json);
  doc["raw"] = {{"rows", raw_rows}, {"missing", counts_json(missing.counts)},
                {"class_balance", balance_json(raw_balance)}};
  ojson cleaning;
  auto& steps = cleaning["rows_after_step"] = ojson::array();
  for (const auto& [step, rows] : rows_after_step) steps.push_back({{"step", step}, {"rows", rows}});
  cleaning["outliers"] = outliers_json(outliers);
  cleaning["outliers_reference"] = outliers_json(outliers_iqr_reference);
  cleaning["rows"] = clean.rows();
  cleaning["class_balance"] = balance_json(clean_balance);
  doc["cleaning"] = std::move(cleaning);

  ojson stats = ojson::object();
  for (const auto& [name, s] : column_stats)
    stats[name] = {{"n", s.n}, {"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"q1", s.q1},
                   {"median", s.median}, {"q3", s.q3}, {"max", s.max}, {"skewness", s.skewness}};
  doc["column_stats"] = std::move(stats);
  if (correlation) {
    ojson m = ojson::array();
    for (Eigen::Index r = 0; r < correlation->rows(); ++r) {
      ojson row = ojson::array();
      for (Eigen::Index c = 0; c < correlation->cols(); ++c) row.push_back((*correlation)(r, c));
      m.push_back(std::move(row));
    }
    doc["correlation"] = {{"names", clean.feature_names}, {"matrix", std::move(m)}};
  } else {
    doc["correlation"] = nullptr;
  }

  doc["feature_scores"] = ojson::parse(feature_scores.to_json());
  doc["selection"] = {{"k", selection.k}, {"selected", selection.selected}};
  doc["smote"] = {{"mode", ojson::parse(config_json).at("smote_mode")},
                  {"before", balance_json(clean_balance)},
                  {"after", smote_balance ? balance_json(*smote_balance) : ojson()}};
  auto& cv = doc["cross_validation"] = ojson::object();
  cv["original"] = ojson::array();
  for (const auto& s : cv_original) cv["original"].push_back(summary_json(s));
  cv["smote"] = ojson::array();
  for (const auto& s : cv_smote) cv["smote"].push_back(summary_json(s));
  doc["holdout_evaluated"] = holdout_done;
  doc["grid_search"] = grid ? ojson::parse(grid->to_json()) : ojson();
  return doc.dump(2);
}

RunReport run_pipeline(const PipelineConfig& input_config, Stage stop_after) {
  PipelineConfig config = input_config;
  in_stage("config", [&] {
    if (config.input_path.empty()) {
      if (const char* env = std::getenv("CHD_DATA"); env && *env) config.input_path = env;
    }
    if (config.input_path.empty())
      throw Error(Errc::ConfigError, "no input_path in config and CHD_DATA is not set");
    config.validate();
  });

  RunReport report;
  report.config_json = config.to_json();
  const Schema schema = in_stage("config", [&] { return config.schema(); });
  Stopwatch total;

  // ingest
  Stopwatch t;
  CohortTable table = in_stage("ingest", [&] { return load_csv(config.input_path, schema); });
  report.raw_rows = table.row_count();
  report.missing = missing_report(table);
  report.raw_balance = in_stage("ingest", [&] { return class_balance(table); });
  report.timings["ingest"] = t.seconds();

  // clean
  t = Stopwatch();
  in_stage("clean", [&] {
    for (auto step : config.cleaning_order) {
      switch (step) {
        case CleaningStep::DropMissing:
          table = drop_rows_missing(table, config.drop_columns);
          break;
        case CleaningStep::ImputeMean:
          table = impute_mean(table, config.impute_columns);
          break;
        case CleaningStep::RemoveOutliers: {
          const auto other = config.outlier_method == OutlierMethod::Sigma ? OutlierMethod::IQR
                                                                            : OutlierMethod::Sigma;
          report.outliers_iqr_reference = remove_outliers(table, other, config.outlier_columns).second;
          auto [cleaned, outliers] = remove_outliers(table, config.outlier_method, config.outlier_columns);
          table = std::move(cleaned);
          report.outliers = std::move(outliers);
          break;
        }
      }
      report.rows_after_step.emplace_back(to_string(step), table.row_count());
    }
    report.clean = to_dataset(table);
    report.clean_balance = class_balance(table);
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      const auto values = table.present_values(c);
      if (!values.empty()) report.column_stats.emplace_back(schema[c].name, column_stats(values));
    }
    try {
      report.correlation = pearson_correlation(report.clean);
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroVarianceColumn) throw;
    }
  });
  report.clean_table = table;
  report.timings["clean"] = t.seconds();
  if (stop_after == Stage::Clean) return report;

  // features
  t = Stopwatch();
  Dataset selected = in_stage("score-features", [&] {
    std::vector<FeatureKind> kinds;
    for (auto idx : schema.predictor_indices()) kinds.push_back(schema[idx].kind);
    report.feature_scores = score_features(report.clean, config.mi_bins, kinds);
    const std::size_t k = config.select_k == 0 ? report.clean.cols() : config.select_k;
    report.selection = select_k_best(report.feature_scores, k);
    return apply_selection(report.clean, report.selection);
  });
  report.timings["score-features"] = t.seconds();
  if (stop_after == Stage::ScoreFeatures) return report;

  // evaluation
  EvalOptions options;
  options.folds = config.cv_k;
  options.seed = derive_seed(config.seed, kSplitStream);
  options.smote = config.smote;
  options.smote.seed = derive_seed(config.seed, kSmoteStream);
  options.test_fraction = config.test_fraction;
  options.threads = config.threads;
  if (config.smote.round_nominal) {
    const auto predictors = schema.predictor_indices();
    std::vector<std::size_t> chosen = report.selection.selected;
    std::sort(chosen.begin(), chosen.end());
    for (auto j : chosen) options.smote.nominal_columns.push_back(schema[predictors[j]].kind == FeatureKind::BinaryNominal);
  }

  std::vector<ClassifierSpec> specs;
  for (auto algorithm : kAllAlgorithms) {
    for (const auto& s : config.algorithms) {
      if (s.algorithm() == algorithm)
        specs.push_back(s.with_seed(derive_seed(config.seed, kModelStreamBase + static_cast<std::uint64_t>(algorithm))));
    }
  }

  const bool with_smote = config.smote_mode != SmoteMode::None;
  t = Stopwatch();
  in_stage("evaluate", [&] {
    if (with_smote) {
      const Dataset balanced = smote(selected, options.smote);
      report.smote_balance = ClassBalance{balanced.count_label(0), balanced.count_label(1)};
    }
    for (const auto& spec : specs) {
      EvalOptions o = options;
      o.mode = SmoteMode::None;
      report.cv_original.push_back(cross_validate(spec, selected, o));
      if (with_smote) {
        o.mode = config.smote_mode;
        report.cv_smote.push_back(cross_validate(spec, selected, o));
      }
    }
  });
  report.timings["evaluate"] = t.seconds();
  if (stop_after == Stage::Evaluate) return report;

  t = Stopwatch();
  in_stage("holdout", [&] {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      EvalOptions o = options;
      o.mode = SmoteMode::None;
      const auto original = holdout_evaluate(specs[i], selected, o);
      report.cv_original[i].holdout_auc = original.auc;
      report.cv_original[i].holdout_accuracy = original.accuracy;
      if (with_smote) {
        o.mode = config.smote_mode;
        const auto balanced = holdout_evaluate(specs[i], selected, o);
        report.cv_smote[i].holdout_auc = balanced.auc;
        report.cv_smote[i].holdout_accuracy = balanced.accuracy;
      }
    }
    report.holdout_done = true;
  });
  report.timings["holdout"] = t.seconds();

  if (config.grid_search) {
    t = Stopwatch();
    in_stage("grid-search", [&] {
      const ClassifierSpec base = ClassifierSpec(config.grid_search->algorithm)
                                      .with_seed(derive_seed(config.seed, kModelStreamBase +
                                                                              static_cast<std::uint64_t>(config.grid_search->algorithm)));
      EvalOptions o = options;
      o.mode = SmoteMode::None;
      report.grid = grid_search(base, config.grid_search->grid, selected, o);
    });
    report.timings["grid-search"] = t.seconds();
  }
  report.timings["total"] = total.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::string header_row(const char* first, const std::vector<EvalSummary>& summaries) {
  std::string out = first;
  for (const auto& s : summaries) out += std::string(",") + to_string(s.spec.algorithm());
  return out + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
  written.push_back(path);
}

}  // namespace

std::string cv_table_csv(const std::vector<EvalSummary>& summaries) {
  std::string out = header_row("Parameter", summaries);
  out += "Mean";
  for (const auto& s : summaries) out += "," + format_fixed(s.mean, 6);
  out += "\nStd";
  for (const auto& s : summaries) out += "," + format_fixed(s.std, 6);
  return out + "\n";
}

std::string holdout_table_csv(const std::vector<EvalSummary>& original,
                              const std::vector<EvalSummary>& smote) {
  std::string out = header_row("Data", original);
  auto row = [&](const char* label, const std::vector<EvalSummary>& summaries) {
    out += label;
    for (const auto& s : summaries) out += "," + format_fixed(s.holdout_auc.value_or(0.5), 6);
    out += "\n";
  };
  row("Original", original);
  if (!smote.empty()) row("Smote", smote);
  return out;
}

std::vector<std::filesystem::path> emit_tables(const RunReport& report, Stage reached,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;

  {
    std::ostringstream csv;
    if (report.clean_table) write_csv(csv, *report.clean_table);
    write_file(dir / "cleaned.csv", csv.str(), written);
  }
  write_file(dir / "missing_report.json", report.missing.to_json() + "\n", written);
  write_file(dir / "outlier_report.json", report.outliers.to_json() + "\n", written);

  if (reached != Stage::Clean) {
    write_file(dir / "feature_scores.txt", report.feature_scores.to_text(), written);
    write_file(dir / "feature_scores.json", report.feature_scores.to_json() + "\n", written);
  }
  if (reached == Stage::Evaluate || reached == Stage::Run) {
    write_file(dir / "cv_original.csv", cv_table_csv(report.cv_original), written);
    if (!report.cv_smote.empty()) write_file(dir / "cv_smote.csv", cv_table_csv(report.cv_smote), written);
    std::string box = "mode,algorithm,min,q1,median,q3,max\n";
    auto add = [&](const char* mode, const std::vector<EvalSummary>& summaries) {
      for (const auto& s : summaries) {
        const auto b = five_number_summary(s.fold_aucs);
        box += std::string(mode) + "," + to_string(s.spec.algorithm()) + "," + format_fixed(b.min, 6) + "," +
               format_fixed(b.q1, 6) + "," + format_fixed(b.median, 6) + "," + format_fixed(b.q3, 6) + "," +
               format_fixed(b.max, 6) + "\n";
      }
    };
    add("original", report.cv_original);
    add("smote", report.cv_smote);
    write_file(dir / "boxplot_stats.csv", box, written);
  }
  if (reached == Stage::Run) {
    write_file(dir / "holdout.csv", holdout_table_csv(report.cv_original, report.cv_smote), written);
    if (report.grid) write_file(dir / "grid_search.csv", report.grid->to_csv(), written);
  }
  write_file(dir / "report.json", report.to_json() + "\n", written);

  ojson timings = ojson::object();
  for (const auto& [k, v] : report.timings) timings[k] = v;
  write_file(dir / "timings.json", timings.dump(2) + "\n", written);
  return written;
}

}  // namespace chd
