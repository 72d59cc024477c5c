from __future__ import annotations

import numpy as np

from .base import make_scaler


class KNNRegressor:
    """Unweighted k-nearest-neighbour mean under Euclidean distance.

    Equidistant neighbours are ranked by training row index, so predictions
    are deterministic.
    """

    def __init__(self, k: int = 3, standardize: bool = True):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.standardize = standardize

    def fit(self, X, y) -> "KNNRegressor":
        self.scaler_ = make_scaler(self.standardize).fit(X)
        self.X_ = self.scaler_.transform(X)
        self.y_ = np.asarray(y, dtype=float).copy()
        self.n_features_ = self.X_.shape[1]
        return self

    def kneighbors(self, X) -> np.ndarray:
        Z = self.scaler_.transform(X)
        d2 = ((Z[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2)
        k = min(self.k, self.X_.shape[0])
        return np.argsort(d2, axis=1, kind="stable")[:, :k]

    def predict(self, X) -> np.ndarray:
        return self.y_[self.kneighbors(X)].mean(axis=1)
