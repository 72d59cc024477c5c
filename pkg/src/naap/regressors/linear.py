from __future__ import annotations

import numpy as np

from .activations import Activation, forward, transform_targets
from .base import make_scaler


class ActivatedLinearRegression:
    """Least squares on inverse-activated targets; predicts ``f(x.w + b)``.

    The solve goes through ``numpy.linalg.lstsq`` (SVD), which returns the
    minimum-norm solution when the design is rank deficient, e.g. after a
    feature subset leaves collinear columns.
    """

    def __init__(self, activation: Activation | str = Activation.IDENTITY, standardize: bool = True):
        self.activation = Activation(activation)
        self.standardize = standardize

    def _design(self, X) -> np.ndarray:
        Z = self.scaler_.transform(X)
        return np.hstack([Z, np.ones((Z.shape[0], 1))])

    def fit(self, X, y) -> "ActivatedLinearRegression":
        X = np.asarray(X, dtype=float)
        self.scaler_ = make_scaler(self.standardize).fit(X)
        self.n_features_ = X.shape[1]
        t = transform_targets(self.activation, y)
        coef, *_ = np.linalg.lstsq(self._design(X), t, rcond=None)
        self.coef_ = coef[:-1]
        self.intercept_ = float(coef[-1])
        return self

    def decision_function(self, X) -> np.ndarray:
        return self._design(X) @ np.append(self.coef_, self.intercept_)

    def predict(self, X) -> np.ndarray:
        return forward(self.activation, self.decision_function(X))
