"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import aplrkit


@pytest.fixture(scope="module")
def regression_data():
    rng = np.random.default_rng(0)
    X = rng.uniform(-2, 2, size=(300, 3))
    y = 2 * np.maximum(X[:, 0], 0) + 0.5 * X[:, 1] + rng.normal(0, 0.05, 300)
    return X, y


@pytest.fixture(scope="module")
def classification_data():
    rng = np.random.default_rng(1)
    X = rng.integers(-2, 3, size=(240, 4)).astype(float)
    y = (X[:, 0] + 0.5 * X[:, 1] + rng.normal(0, 0.3, 240) > 0).astype(float)
    return X, y


def test_regression_fit_and_predict(regression_data):
    X, y = regression_data
    m = aplrkit.fit(X, y, task="regression", steps=400, cv_folds=None,
                    min_observations_in_split=10)
    pred = m.predict(X)
    r2 = 1 - np.sum((y - pred) ** 2) / np.sum((y - np.mean(y)) ** 2)
    assert r2 > 0.95
    assert m.task == "regression"


def test_classification_surface(classification_data):
    X, y = classification_data
    m = aplrkit.fit(X, y, steps=200, cv_folds=None, min_observations_in_split=10)
    labels = m.predict(X)
    proba = m.predict_proba(X)
    assert proba.shape == (240, 2)
    assert np.allclose(proba.sum(axis=1), 1.0)
    assert aplrkit.classification_metrics(y, labels)["accuracy"] > 0.8
    assert aplrkit.auc(proba[:, 1], y) > 0.9


def test_model_roundtrip(tmp_path, classification_data):
    X, y = classification_data
    m = aplrkit.fit(X, y, steps=100, cv_folds=None, min_observations_in_split=10)
    path = str(tmp_path / "model.json")
    m.save(path)
    loaded = aplrkit.load_model(path)
    assert np.array_equal(loaded.predict(X), m.predict(X))
    assert np.array_equal(loaded.predict_proba(X), m.predict_proba(X))


def test_determinism(classification_data):
    X, y = classification_data
    a = aplrkit.fit(X, y, steps=80, min_observations_in_split=10, seed=42)
    b = aplrkit.fit(X, y, steps=80, min_observations_in_split=10, seed=42)
    assert a.to_json() == b.to_json()


def test_local_contributions_add_up(classification_data):
    X, y = classification_data
    m = aplrkit.fit(X, y, steps=150, cv_folds=None, min_observations_in_split=10)
    proba = m.predict_proba(X)
    for row in (0, 7, 101):
        ex = m.local_contributions(X, row)
        logit = ex["intercept"] + sum(ex["contributions"].values())
        p = 1.0 / (1.0 + np.exp(-logit))
        assert p == pytest.approx(proba[row, ex["class_index"]], abs=1e-12)


def test_oversample_balances():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(120, 3))
    y = np.r_[np.ones(90), np.zeros(30)]
    Xo, yo = aplrkit.oversample(X, y, k=5, seed=42)
    assert (yo == 0).sum() == (yo == 1).sum() == 90
    assert np.array_equal(Xo[:120], X)


def test_terms_table(classification_data):
    X, y = classification_data
    m = aplrkit.fit(X, y, steps=100, cv_folds=None, min_observations_in_split=10,
                    feature_names=["a", "b", "c", "d"])
    rows = m.terms(1)
    assert rows[0]["term"] == "Intercept"
    assert all("coefficient" in r for r in rows)
    gi = m.global_importance(X, feature_names=["a", "b", "c", "d"])
    assert gi[0][1] >= gi[-1][1]


def test_errors():
    X = np.zeros((4, 2))
    with pytest.raises(ValueError):
        aplrkit.fit(X, np.array([0.0, 1.0, 2.0, 1.0]), task="classification",
                    min_observations_in_split=1)
