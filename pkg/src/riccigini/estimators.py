"""scikit-learn compatible wrappers.

``OLSRegression`` fits a single-regressor line with the same diagnostics as
:func:`riccigini.analysis.ols_fit`. ``RicciFlowTransformer`` maps rows of
the 16 canonical indicators (in canonical column order) to the scalar
Ricci aggregate, so it can sit inside a ``Pipeline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .analysis import ols_fit
from .errors import DomainError
from .indicators import CANONICAL_ORDER, georgia_2023


class OLSRegression(RegressorMixin, BaseEstimator):
    """Least-squares line with R^2, Z statistic and normal p-value.

    Attributes set by ``fit``: ``coef_`` (shape ``(1,)``), ``intercept_``,
    ``r_squared_``, ``z_stat_``, ``p_value_``, ``result_``.
    """

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_2d=False, y_numeric=True)
        x = self._column(X)
        self.result_ = ols_fit(x, y)
        self.coef_ = np.array([self.result_.slope])
        self.intercept_ = self.result_.intercept
        self.r_squared_ = self.result_.r_squared
        self.z_stat_ = self.result_.z_stat
        self.p_value_ = self.result_.p_value
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        X = check_array(X, ensure_2d=False)
        return self.intercept_ + self.coef_[0] * self._column(X)

    @staticmethod
    def _column(X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"OLSRegression takes one feature, got {X.shape[1]}")
            return X[:, 0]
        return X


class RicciFlowTransformer(TransformerMixin, BaseEstimator):
    """Weighted sum of log indicators, one output column.

    Args:
        alpha_weights: 16 weights in canonical order; ``None`` uses the
            bundled preset weights.
        log_input: if true, ``X`` already holds log values; otherwise raw
            positive values that are log-transformed first.
    """

    def __init__(self, alpha_weights=None, log_input=True):
        self.alpha_weights = alpha_weights
        self.log_input = log_input

    def fit(self, X, y=None):
        X = check_array(X)
        if X.shape[1] != len(CANONICAL_ORDER):
            raise ValueError(f"expected {len(CANONICAL_ORDER)} columns, got {X.shape[1]}")
        if self.alpha_weights is None:
            weights = georgia_2023().dataset.alpha_weights
        else:
            weights = np.asarray(self.alpha_weights, dtype=float)
            if weights.shape != (len(CANONICAL_ORDER),):
                raise ValueError("alpha_weights must have 16 entries")
        self.alpha_weights_ = weights
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "alpha_weights_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        if not self.log_input:
            if np.any(X <= 0):
                raise DomainError("raw indicator values must be positive")
            X = np.log(X)
        # canonical-order accumulation, matching ricci_aggregate
        total = np.zeros(X.shape[0])
        for k in range(X.shape[1]):
            total = total + self.alpha_weights_[k] * X[:, k]
        return total.reshape(-1, 1)

    def get_feature_names_out(self, input_features=None):
        return np.array(["ricci_scalar"], dtype=object)
