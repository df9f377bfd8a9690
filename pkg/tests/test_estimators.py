import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from riccigini import DegenerateDesignError, OLSRegression, RicciFlowTransformer, ols_fit, ricci_aggregate


def test_ols_estimator_matches_function():
    x = np.array([1, 2, 3, 4, 5.0])
    y = np.array([2.1, 3.9, 6.2, 7.8, 10.1])
    est = OLSRegression().fit(x.reshape(-1, 1), y)
    res = ols_fit(x, y)
    assert est.coef_[0] == res.slope and est.intercept_ == res.intercept
    assert est.score(x.reshape(-1, 1), y) == pytest.approx(res.r_squared, abs=1e-12)
    np.testing.assert_allclose(est.predict([[6.0]]), [res.intercept + 6 * res.slope])


def test_ols_estimator_rejects_two_features():
    with pytest.raises(ValueError):
        OLSRegression().fit(np.ones((4, 2)), np.arange(4.0))


def test_ols_estimator_degenerate():
    with pytest.raises(DegenerateDesignError):
        OLSRegression().fit([[1.0], [1.0], [1.0]], [1, 2, 3])


def test_ols_estimator_not_fitted():
    with pytest.raises(NotFittedError):
        OLSRegression().predict([[1.0]])


def test_transformer_matches_aggregate(preset):
    X = preset.dataset.ln_values.reshape(1, -1)
    out = RicciFlowTransformer().fit_transform(X)
    assert out.shape == (1, 1)
    assert out[0, 0] == ricci_aggregate(preset.dataset).sum_ricci


def test_transformer_raw_input(preset):
    raw = np.exp(preset.dataset.ln_values).reshape(1, -1)
    out = RicciFlowTransformer(log_input=False).fit_transform(np.vstack([raw, raw]))
    assert out[:, 0] == pytest.approx([ricci_aggregate(preset.dataset).sum_ricci] * 2, rel=1e-12)


def test_transformer_params_and_clone():
    est = RicciFlowTransformer(alpha_weights=[0.1] * 16, log_input=False)
    assert est.get_params() == {"alpha_weights": [0.1] * 16, "log_input": False}
    assert clone(est).get_params()["log_input"] is False


def test_transformer_wrong_width():
    with pytest.raises(ValueError):
        RicciFlowTransformer().fit(np.ones((2, 15)))


def test_pipeline_composition(preset):
    rng = np.random.default_rng(0)
    X = preset.dataset.ln_values + rng.normal(scale=0.1, size=(20, 16))
    ricci = RicciFlowTransformer().fit_transform(X)[:, 0]
    y = 3 * ricci + 2
    pipe = make_pipeline(RicciFlowTransformer(), OLSRegression()).fit(X, y)
    assert pipe[-1].coef_[0] == pytest.approx(3.0, rel=1e-10)
    assert pipe.score(X, y) == pytest.approx(1.0, abs=1e-12)
