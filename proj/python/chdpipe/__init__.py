"""Python bindings for the CHD classification pipeline."""

from ._core import (  # noqa: F401
    Algorithm,
    ChdError,
    ClassifierSpec,
    CohortTable,
    ColumnStats,
    Dataset,
    EvalOptions,
    EvalSummary,
    FeatureScores,
    OutlierMethod,
    Schema,
    SmoteMode,
    SmoteParams,
    TrainedModel,
    class_balance,
    column_stats,
    cross_validate,
    default_config,
    discretize,
    drop_rows_missing,
    fit,
    grid_search,
    holdout_evaluate,
    impute_mean,
    iqr_outlier_mask,
    load_csv,
    minority_neighbors,
    missing_report,
    mutual_information,
    pearson_correlation,
    remove_outliers,
    roc_auc,
    roc_curve,
    run_pipeline,
    score_features,
    select_k_best,
    sigma_outlier_mask,
    smote,
    standardize,
    stratified_kfold,
    stratified_split,
    to_dataset,
)

__version__ = "0.1.0"
