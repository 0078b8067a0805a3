import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hollowgaze.estimator import FEATURES, GazePerceptEstimator

VIEWERS = np.array([[0.0, 0.0, 1000.0], [500.0, 0.0, 1000.0], [-500.0, 0.0, 1000.0], [0.0, 0.0, 400.0]])


def test_params_and_clone():
    est = GazePerceptEstimator(depth_mm=15.0, profile="autism_hypoprior")
    assert est.get_params()["depth_mm"] == 15.0
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(half_width_deg=5.0)
    assert est.half_width_deg == 5.0


def test_fit_calibrates():
    est = GazePerceptEstimator().fit()
    assert est.fusion_params_.logistic_gain == pytest.approx(1.657339, abs=1e-6)
    assert est.schizophrenia_scale_ == pytest.approx(0.0118812, abs=1e-7)
    assert est.n_features_in_ == 3


def test_not_fitted():
    with pytest.raises(NotFittedError):
        GazePerceptEstimator().transform(VIEWERS)


def test_transform_shapes_and_values():
    est = GazePerceptEstimator().fit(VIEWERS)
    out = est.transform(VIEWERS)
    assert out.shape == (4, len(FEATURES))
    assert list(est.get_feature_names_out()) == list(FEATURES)
    assert out[0, 2] == 0.0 and out[0, 4] == pytest.approx(0.941176, abs=1e-6)
    assert out[1, 2] == pytest.approx(-out[2, 2], abs=1e-9)
    assert out[3, 4] < 0.5


def test_predict_and_proba():
    est = GazePerceptEstimator().fit()
    mutual = est.predict(VIEWERS)
    assert mutual.dtype == bool and mutual[0] and not mutual[1]
    proba = est.predict_proba(VIEWERS)
    assert proba.shape == (4, 2)
    np.testing.assert_allclose(proba.sum(axis=1), 1.0)
    assert proba[0, 1] == pytest.approx(0.99, abs=1e-9)


def test_schizophrenia_profile_uses_calibrated_scale():
    est = GazePerceptEstimator(profile="schizophrenia").fit()
    assert est.predict_proba(VIEWERS[:1])[0, 1] == pytest.approx(0.06, abs=1e-6)


def test_bad_columns():
    est = GazePerceptEstimator().fit()
    with pytest.raises(ValueError, match="3 columns"):
        est.transform(np.zeros((2, 2)))
