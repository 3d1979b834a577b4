import json
import math
import os
import pathlib

import numpy as np
import pytest

import chdpipe

DATA = pathlib.Path(os.environ.get("CHD_TEST_DATA_DIR", pathlib.Path(__file__).resolve().parents[1] / "data"))
FIXTURE = DATA / "fixture60.csv"


def blobs(n=120, seed=0):
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < 0.3).astype(int)
    x = rng.normal(size=(n, 3))
    x[:, 0] += 2.0 * y
    return chdpipe.Dataset(x, y.tolist())


def test_ingest_and_reports():
    table = chdpipe.load_csv(str(FIXTURE))
    assert len(table) == 60
    missing = chdpipe.missing_report(table)
    assert missing["TenYearCHD"] == 0
    assert sum(missing.values()) > 0
    negatives, positives = chdpipe.class_balance(table)
    assert negatives + positives == 60


def test_preprocess_examples():
    stats = chdpipe.column_stats([1, 2, 3, 4, 100])
    assert stats.q1 == 2 and stats.q3 == 4 and stats.mean == 22
    assert math.isclose(stats.skewness, 1.4975367033335198, rel_tol=1e-12)
    assert chdpipe.iqr_outlier_mask([1, 2, 3, 4, 100]) == [False, False, False, False, True]
    assert not any(chdpipe.sigma_outlier_mask([0] * 9 + [100]))


def test_features_and_resample():
    assert math.isclose(chdpipe.mutual_information([0, 1, 0, 1], [0, 1, 0, 1]), math.log(2))
    d = blobs()
    scores = chdpipe.score_features(d, 10, [])
    assert chdpipe.select_k_best(scores, 1) == [0]
    out = chdpipe.smote(d, chdpipe.SmoteParams(seed=3))
    assert out.labels.count(0) == out.labels.count(1)
    assert np.array_equal(np.asarray(out.features)[: len(d)], np.asarray(d.features))
    assert not any(out.synthetic[: len(d)]) and all(out.synthetic[len(d):])


def test_models_and_eval():
    d = blobs()
    for algo in [chdpipe.Algorithm.LR, chdpipe.Algorithm.NB, chdpipe.Algorithm.CART, chdpipe.Algorithm.SVM]:
        model = chdpipe.fit(chdpipe.ClassifierSpec(algo), d)
        back = chdpipe.TrainedModel.from_json(model.to_json())
        row = list(np.asarray(d.features)[0])
        assert back.score(row) == model.score(row)
    assert chdpipe.roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    opts = chdpipe.EvalOptions(folds=5, seed=1, mode=chdpipe.SmoteMode.LeakageFree)
    summary = chdpipe.cross_validate(chdpipe.ClassifierSpec(chdpipe.Algorithm.LR), d, opts)
    assert len(summary.fold_aucs) == 5 and summary.mean > 0.8
    best, best_mean, cells = chdpipe.grid_search(
        chdpipe.ClassifierSpec(chdpipe.Algorithm.LR), [("lambda", [0.1, 1.0])], d, opts)
    assert len(cells) == 2 and best_mean == max(m for _, m in cells)


def test_errors_raise_chd_error():
    with pytest.raises(chdpipe.ChdError):
        chdpipe.roc_auc([0.1, 0.2], [1, 1])
    with pytest.raises(ValueError):
        chdpipe.ClassifierSpec(chdpipe.Algorithm.KNN, {"k": 0})


def test_run_pipeline(tmp_path):
    config = json.loads(chdpipe.default_config())
    config["input_path"] = str(FIXTURE)
    config["grid_search"] = None
    report = json.loads(chdpipe.run_pipeline(json.dumps(config), "evaluate", str(tmp_path)))
    assert (tmp_path / "cv_original.csv").read_text().startswith("Parameter,LR,KNN,CART,NB,SVM,RF\n")
    again = json.loads(chdpipe.run_pipeline(json.dumps(config), "evaluate"))
    assert report == again
