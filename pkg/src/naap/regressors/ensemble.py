"""Tree ensembles: bagged forest, squared-loss gradient boosting, AdaBoost.R2."""

from __future__ import annotations

import numpy as np

from .tree import RegressionTree, presort


def _child_rngs(seed: int | None, n: int) -> list[np.random.Generator]:
    # one independent stream per member, so results don't depend on fit order
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


class RandomForest:
    """Bootstrap-aggregated trees; every split considers all features."""

    def __init__(self, n_estimators: int = 100, max_depth: int | None = None,
                 min_samples_split: int = 2, seed: int | None = 0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.seed = seed

    def fit(self, X, y) -> "RandomForest":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(y)
        self.n_features_ = X.shape[1]
        order = presort(X)
        self.trees_ = []
        for rng in _child_rngs(self.seed, self.n_estimators):
            counts = np.bincount(rng.integers(0, n, n), minlength=n)
            tree = RegressionTree(self.max_depth, self.min_samples_split)
            self.trees_.append(tree.fit(X, y, sample_weight=counts, order=order))
        return self

    def predict(self, X) -> np.ndarray:
        return np.mean([t.predict(X) for t in self.trees_], axis=0)


class GradientBoosting:
    """Stage-wise additive trees fitted to squared-loss residuals."""

    def __init__(self, n_estimators: int = 100, learning_rate: float = 0.1, max_depth: int = 3,
                 min_samples_split: int = 2):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def fit(self, X, y) -> "GradientBoosting":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self.n_features_ = X.shape[1]
        self.init_ = float(y.mean())
        f = np.full(len(y), self.init_)
        order = presort(X)
        self.trees_ = []
        for _ in range(self.n_estimators):
            tree = RegressionTree(self.max_depth, self.min_samples_split).fit(X, y - f, order=order)
            f += self.learning_rate * tree.predict(X)
            self.trees_.append(tree)
        return self

    def staged_predict(self, X):
        f = np.full(np.asarray(X).shape[0], self.init_)
        for tree in self.trees_:
            f = f + self.learning_rate * tree.predict(X)
            yield f

    def predict(self, X) -> np.ndarray:
        f = np.full(np.asarray(X).shape[0], self.init_)
        for tree in self.trees_:
            f += self.learning_rate * tree.predict(X)
        return f


class AdaBoostR2:
    """Drucker's AdaBoost.R2 with linear loss.

    Each round fits a shallow tree on a weighted bootstrap resample; the
    ensemble predicts the weighted median of its members.
    """

    def __init__(self, n_estimators: int = 50, max_depth: int = 3, learning_rate: float = 1.0,
                 seed: int | None = 0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, X, y) -> "AdaBoostR2":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(y)
        self.n_features_ = X.shape[1]
        order = presort(X)
        w = np.full(n, 1.0 / n)
        self.trees_, weights = [], []
        for rng in _child_rngs(self.seed, self.n_estimators):
            # a weighted resample, held as per-row multiplicities
            counts = np.bincount(rng.choice(n, size=n, replace=True, p=w), minlength=n)
            tree = RegressionTree(self.max_depth).fit(X, y, sample_weight=counts, order=order)
            err = np.abs(tree.predict(X) - y)
            err_max = err.max()
            if err_max <= 0:
                self.trees_.append(tree)
                weights.append(1.0)
                break
            loss = err / err_max
            avg = float(np.dot(w, loss))
            if avg >= 0.5:
                if not self.trees_:
                    self.trees_.append(tree)
                    weights.append(1.0)
                break
            beta = avg / (1.0 - avg)
            self.trees_.append(tree)
            weights.append(self.learning_rate * np.log(1.0 / beta))
            w = w * np.power(beta, (1.0 - loss) * self.learning_rate)
            w /= w.sum()
        self.estimator_weights_ = np.array(weights)
        return self

    def predict(self, X) -> np.ndarray:
        preds = np.array([t.predict(X) for t in self.trees_]).T  # (n_samples, n_trees)
        order = np.argsort(preds, axis=1, kind="stable")
        cw = np.cumsum(self.estimator_weights_[order], axis=1)
        pick = np.argmax(cw >= 0.5 * cw[:, -1:], axis=1)
        rows = np.arange(preds.shape[0])
        return preds[rows, order[rows, pick]]
