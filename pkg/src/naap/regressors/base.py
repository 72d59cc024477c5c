"""Shared preprocessing for the distance- and least-squares-based models."""

from __future__ import annotations

import numpy as np


class Standardizer:
    """Per-feature z-scoring with training-set statistics; constant columns keep scale 1."""

    def fit(self, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.scale_ = np.where(sd > 0, sd, 1.0)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean_) / self.scale_


class Identity:
    def fit(self, X):
        return self

    def transform(self, X):
        return np.asarray(X, dtype=float)


def make_scaler(standardize: bool):
    return Standardizer() if standardize else Identity()
