#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "chd/error.hpp"
#include "chd/eval.hpp"
#include "chd/features.hpp"
#include "chd/ingest.hpp"
#include "chd/models.hpp"
#include "chd/pipeline.hpp"
#include "chd/preprocess.hpp"
#include "chd/resample.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

std::vector<std::pair<std::string, std::size_t>> as_items(const chd::MissingReport& r) { return r.counts; }

py::dict counts_dict(const std::vector<std::pair<std::string, std::size_t>>& counts) {
  py::dict d;
  for (const auto& [name, n] : counts) d[py::str(name)] = n;
  return d;
}

py::dict outlier_dict(const chd::OutlierReport& r) {
  return py::dict("method"_a = chd::to_string(r.method), "columns"_a = counts_dict(r.counts),
                  "total"_a = r.total, "rows_removed"_a = r.rows_removed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CHD classification pipeline: cleaning, MI scoring, SMOTE, six classifiers, ROC-AUC evaluation";

  static py::exception<chd::Error> chd_error(m, "ChdError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const chd::Error& e) {
      chd_error(e.what());
    }
  });

  // ---- ingest
  py::enum_<chd::FeatureKind>(m, "FeatureKind")
      .value("BinaryNominal", chd::FeatureKind::BinaryNominal)
      .value("Ordinal", chd::FeatureKind::Ordinal)
      .value("Continuous", chd::FeatureKind::Continuous);

  py::class_<chd::Schema>(m, "Schema")
      .def_static("framingham", &chd::Schema::framingham)
      .def_static("from_json", &chd::Schema::from_json, "text"_a)
      .def_property_readonly("names",
                             [](const chd::Schema& s) {
                               std::vector<std::string> names;
                               for (const auto& c : s.columns()) names.push_back(c.name);
                               return names;
                             })
      .def_property_readonly("kinds",
                             [](const chd::Schema& s) {
                               std::vector<chd::FeatureKind> kinds;
                               for (const auto& c : s.columns()) kinds.push_back(c.kind);
                               return kinds;
                             })
      .def_property_readonly("target_index", &chd::Schema::target_index)
      .def("__len__", &chd::Schema::size);

  py::class_<chd::CohortTable>(m, "CohortTable")
      .def_property_readonly("schema", &chd::CohortTable::schema)
      .def_property_readonly("row_count", &chd::CohortTable::row_count)
      .def("column", [](const chd::CohortTable& t, const std::string& name) { return t.column(name); }, "name"_a)
      .def("__len__", &chd::CohortTable::row_count);

  m.def("load_csv", &chd::load_csv, "path"_a, "schema"_a = chd::Schema::framingham());
  m.def("missing_report", [](const chd::CohortTable& t) { return counts_dict(as_items(chd::missing_report(t))); });
  m.def("class_balance", [](const chd::CohortTable& t) {
    const auto b = chd::class_balance(t);
    return py::make_tuple(b.negatives, b.positives);
  });

  // ---- preprocess
  py::class_<chd::ColumnStats>(m, "ColumnStats")
      .def_readonly("n", &chd::ColumnStats::n)
      .def_readonly("mean", &chd::ColumnStats::mean)
      .def_readonly("std", &chd::ColumnStats::std)
      .def_readonly("min", &chd::ColumnStats::min)
      .def_readonly("max", &chd::ColumnStats::max)
      .def_readonly("q1", &chd::ColumnStats::q1)
      .def_readonly("median", &chd::ColumnStats::median)
      .def_readonly("q3", &chd::ColumnStats::q3)
      .def_readonly("skewness", &chd::ColumnStats::skewness);

  py::enum_<chd::OutlierMethod>(m, "OutlierMethod")
      .value("IQR", chd::OutlierMethod::IQR)
      .value("Sigma", chd::OutlierMethod::Sigma);

  m.def("column_stats", [](const std::vector<double>& v) { return chd::column_stats(v); }, "values"_a);
  m.def("impute_mean", [](const chd::CohortTable& t, const std::vector<std::string>& cols) {
    return chd::impute_mean(t, cols);
  }, "table"_a, "columns"_a);
  m.def("drop_rows_missing", [](const chd::CohortTable& t, const std::vector<std::string>& cols) {
    return chd::drop_rows_missing(t, cols);
  }, "table"_a, "columns"_a);
  m.def("iqr_outlier_mask", [](const std::vector<double>& v) { return chd::iqr_outlier_mask(v); }, "values"_a);
  m.def("sigma_outlier_mask", [](const std::vector<double>& v) { return chd::sigma_outlier_mask(v); }, "values"_a);
  m.def("remove_outliers", [](const chd::CohortTable& t, chd::OutlierMethod method, const std::vector<std::string>& cols) {
    auto [table, report] = chd::remove_outliers(t, method, cols);
    return py::make_tuple(std::move(table), outlier_dict(report));
  }, "table"_a, "method"_a, "columns"_a);

  py::class_<chd::Dataset>(m, "Dataset")
      .def(py::init([](const chd::Matrix& x, const std::vector<int>& y, std::vector<std::string> names) {
             if (names.empty())
               for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("f" + std::to_string(j));
             return chd::Dataset(x, y, std::move(names));
           }),
           "features"_a, "labels"_a, "feature_names"_a = std::vector<std::string>{})
      .def_readonly("features", &chd::Dataset::features)
      .def_readonly("labels", &chd::Dataset::labels)
      .def_readonly("feature_names", &chd::Dataset::feature_names)
      .def_readonly("synthetic", &chd::Dataset::synthetic)
      .def("__len__", &chd::Dataset::rows);

  m.def("to_dataset", &chd::to_dataset, "table"_a);
  m.def("pearson_correlation", &chd::pearson_correlation, "dataset"_a);
  m.def("standardize", &chd::standardize, "train"_a, "apply_to"_a);

  // ---- features
  m.def("discretize", [](const std::vector<double>& v, std::size_t bins) { return chd::discretize(v, bins); },
        "values"_a, "bins"_a = 10);
  m.def("mutual_information", [](const std::vector<int>& x, const std::vector<int>& y) {
    return chd::mutual_information(x, y);
  }, "x_codes"_a, "y"_a);

  py::class_<chd::FeatureScores>(m, "FeatureScores")
      .def_readonly("names", &chd::FeatureScores::names)
      .def_readonly("scores", &chd::FeatureScores::scores)
      .def("to_text", &chd::FeatureScores::to_text);
  m.def("score_features", [](const chd::Dataset& d, std::size_t bins, const std::vector<chd::FeatureKind>& kinds) {
    return chd::score_features(d, bins, kinds);
  }, "dataset"_a, "bins"_a = 10, "kinds"_a = std::vector<chd::FeatureKind>{});
  m.def("select_k_best", [](const chd::FeatureScores& s, std::size_t k) { return chd::select_k_best(s, k).selected; },
        "scores"_a, "k"_a);

  // ---- resample
  py::class_<chd::SmoteParams>(m, "SmoteParams")
      .def(py::init([](std::size_t k, double ratio, std::uint64_t seed) {
             chd::SmoteParams p;
             p.k_neighbors = k;
             p.target_ratio = ratio;
             p.seed = seed;
             return p;
           }),
           "k_neighbors"_a = 5, "target_ratio"_a = 1.0, "seed"_a = 0)
      .def_readwrite("k_neighbors", &chd::SmoteParams::k_neighbors)
      .def_readwrite("target_ratio", &chd::SmoteParams::target_ratio)
      .def_readwrite("seed", &chd::SmoteParams::seed);
  m.def("minority_neighbors", &chd::minority_neighbors, "points"_a, "k"_a);
  m.def("smote", &chd::smote, "dataset"_a, "params"_a = chd::SmoteParams{});

  // ---- models
  py::enum_<chd::Algorithm>(m, "Algorithm")
      .value("LR", chd::Algorithm::LR)
      .value("KNN", chd::Algorithm::KNN)
      .value("CART", chd::Algorithm::CART)
      .value("NB", chd::Algorithm::NB)
      .value("SVM", chd::Algorithm::SVM)
      .value("RF", chd::Algorithm::RF);

  py::class_<chd::ClassifierSpec>(m, "ClassifierSpec")
      .def(py::init<chd::Algorithm, const chd::Hyperparameters&, std::uint64_t>(), "algorithm"_a,
           "hyperparameters"_a = chd::Hyperparameters{}, "seed"_a = 0)
      .def_property_readonly("algorithm", &chd::ClassifierSpec::algorithm)
      .def_property_readonly("hyperparameters", &chd::ClassifierSpec::hyperparameters)
      .def_property_readonly("seed", &chd::ClassifierSpec::seed);

  py::class_<chd::TrainedModel>(m, "TrainedModel")
      .def_property_readonly("spec", &chd::TrainedModel::spec)
      .def_property_readonly("converged", &chd::TrainedModel::converged)
      .def_property_readonly("dimension", &chd::TrainedModel::dimension)
      .def("score", [](const chd::TrainedModel& t, const std::vector<double>& x) { return t.score(x); }, "x"_a)
      .def("score_rows", &chd::TrainedModel::score_rows, "features"_a)
      .def("predict", [](const chd::TrainedModel& t, const std::vector<double>& x) { return t.predict(x).label; }, "x"_a)
      .def("to_json", &chd::TrainedModel::to_json)
      .def_static("from_json", &chd::TrainedModel::from_json, "text"_a);
  m.def("fit", &chd::fit, "spec"_a, "train"_a, py::call_guard<py::gil_scoped_release>());

  // ---- eval
  py::enum_<chd::SmoteMode>(m, "SmoteMode")
      .value("None_", chd::SmoteMode::None)
      .value("PaperFaithful", chd::SmoteMode::PaperFaithful)
      .value("LeakageFree", chd::SmoteMode::LeakageFree);

  m.def("roc_auc", [](const std::vector<double>& s, const std::vector<int>& y) { return chd::roc_auc(s, y); },
        "scores"_a, "labels"_a);
  m.def("roc_curve", [](const std::vector<double>& s, const std::vector<int>& y) {
    const auto c = chd::roc_curve(s, y);
    return py::make_tuple(c.fpr, c.tpr, c.thresholds);
  }, "scores"_a, "labels"_a);
  m.def("stratified_kfold", [](const std::vector<int>& y, std::size_t k, std::uint64_t seed) {
    return chd::stratified_kfold(y, k, seed);
  }, "labels"_a, "k"_a, "seed"_a = 0);
  m.def("stratified_split", &chd::stratified_split, "dataset"_a, "test_fraction"_a = 0.2, "seed"_a = 0);

  py::class_<chd::EvalOptions>(m, "EvalOptions")
      .def(py::init([](std::size_t folds, std::uint64_t seed, chd::SmoteMode mode, chd::SmoteParams smote,
                       double test_fraction, std::size_t threads) {
             return chd::EvalOptions{folds, seed, mode, smote, test_fraction, threads};
           }),
           "folds"_a = 10, "seed"_a = 0, "mode"_a = chd::SmoteMode::None, "smote"_a = chd::SmoteParams{},
           "test_fraction"_a = 0.2, "threads"_a = 0)
      .def_readwrite("folds", &chd::EvalOptions::folds)
      .def_readwrite("seed", &chd::EvalOptions::seed)
      .def_readwrite("mode", &chd::EvalOptions::mode)
      .def_readwrite("smote", &chd::EvalOptions::smote)
      .def_readwrite("test_fraction", &chd::EvalOptions::test_fraction);

  py::class_<chd::EvalSummary>(m, "EvalSummary")
      .def_readonly("spec", &chd::EvalSummary::spec)
      .def_readonly("mode", &chd::EvalSummary::mode)
      .def_readonly("fold_aucs", &chd::EvalSummary::fold_aucs)
      .def_readonly("fold_accuracies", &chd::EvalSummary::fold_accuracies)
      .def_readonly("mean", &chd::EvalSummary::mean)
      .def_readonly("std", &chd::EvalSummary::std)
      .def_readonly("converged", &chd::EvalSummary::converged)
      .def("to_json", &chd::EvalSummary::to_json);

  m.def("cross_validate", [](const chd::ClassifierSpec& spec, const chd::Dataset& d, const chd::EvalOptions& o) {
    return chd::cross_validate(spec, d, o);
  }, "spec"_a, "dataset"_a, "options"_a = chd::EvalOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("holdout_evaluate", [](const chd::ClassifierSpec& spec, const chd::Dataset& d, const chd::EvalOptions& o) {
    return chd::holdout_evaluate(spec, d, o).auc;
  }, "spec"_a, "dataset"_a, "options"_a = chd::EvalOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("grid_search", [](const chd::ClassifierSpec& spec, const chd::Grid& grid, const chd::Dataset& d,
                          const chd::EvalOptions& o) {
    const auto r = chd::grid_search(spec, grid, d, o);
    std::vector<std::pair<chd::Hyperparameters, double>> cells;
    for (const auto& c : r.cells) cells.emplace_back(c.spec.hyperparameters(), c.summary.mean);
    return py::make_tuple(r.best, r.best_mean, cells);
  }, "spec"_a, "grid"_a, "dataset"_a, "options"_a = chd::EvalOptions{});

  // ---- pipeline
  m.def("default_config", &chd::PipelineConfig::default_json);
  m.def("run_pipeline", [](const std::string& config_json, const std::string& stage,
                           const std::optional<std::filesystem::path>& output_dir) {
    const auto config = chd::PipelineConfig::from_json(config_json);
    chd::Stage s = chd::Stage::Run;
    if (stage == "clean") s = chd::Stage::Clean;
    else if (stage == "score-features") s = chd::Stage::ScoreFeatures;
    else if (stage == "evaluate") s = chd::Stage::Evaluate;
    else if (stage != "run") throw chd::Error(chd::Errc::ConfigError, "unknown stage '" + stage + "'");
    const auto report = chd::run_pipeline(config, s);
    if (output_dir) chd::emit_tables(report, s, *output_dir);
    return report.to_json();
  }, "config_json"_a, "stage"_a = "run", "output_dir"_a = std::nullopt);
}
