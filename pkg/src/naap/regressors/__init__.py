"""Regression suite behind one ``fit``/``predict`` interface.

A :class:`RegressorSpec` names a family, its parameters and a seed; ``fit``
turns it into a fitted model. Tree families use raw features; kNN and the
linear family z-score them unless ``standardize`` is switched off.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .activations import NONLINEAR, Activation, ActivationDomainError, forward, transform_targets
from .ensemble import AdaBoostR2, GradientBoosting, RandomForest
from .knn import KNNRegressor
from .linear import ActivatedLinearRegression
from .tree import RegressionTree

FAMILIES = ("knn", "linear", "decision_tree", "random_forest", "gradient_boosting", "adaboost_r2")
TREE_FAMILIES = ("decision_tree", "random_forest", "gradient_boosting", "adaboost_r2")

DEFAULTS: dict[str, dict[str, Any]] = {
    "knn": {"k": 3, "standardize": True},
    "linear": {"activation": "identity", "standardize": True},
    "decision_tree": {"max_depth": None, "min_samples_split": 2},
    "random_forest": {"n_estimators": 100, "max_depth": None, "min_samples_split": 2},
    "gradient_boosting": {"n_estimators": 100, "learning_rate": 0.1, "max_depth": 3, "min_samples_split": 2},
    "adaboost_r2": {"n_estimators": 50, "max_depth": 3, "learning_rate": 1.0},
}


class RegressorError(ValueError):
    pass


@dataclass(frozen=True)
class RegressorSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RegressorError(f"unknown family {self.family!r}")
        unknown = set(self.params) - set(DEFAULTS[self.family])
        if unknown:
            raise RegressorError(f"unknown parameters for {self.family}: {sorted(unknown)}")

    def resolved(self) -> dict[str, Any]:
        return {**DEFAULTS[self.family], **self.params}

    @property
    def label(self) -> str:
        p = self.resolved()
        if self.family == "knn":
            return f"{p['k']}-NN"
        if self.family == "linear":
            return Activation(p["activation"]).label
        if self.family == "decision_tree":
            return "Decision Tree"
        name = {"random_forest": "Random Forest", "gradient_boosting": "Gradient Boosting",
                "adaboost_r2": "AdaBoost"}[self.family]
        return f"{name} (N={p['n_estimators']})"

    @property
    def is_tree(self) -> bool:
        return self.family in TREE_FAMILIES

    def with_seed(self, seed: int | None) -> "RegressorSpec":
        return replace(self, seed=seed)

    def with_params(self, **params) -> "RegressorSpec":
        return replace(self, params={**self.params, **params})

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RegressorSpec":
        return cls(d["family"], dict(d.get("params", {})), d.get("seed", 0))

    @classmethod
    def from_json(cls, text: str) -> "RegressorSpec":
        return cls.from_dict(json.loads(text))


def build(spec: RegressorSpec):
    p = spec.resolved()
    if spec.family == "knn":
        return KNNRegressor(k=p["k"], standardize=p["standardize"])
    if spec.family == "linear":
        return ActivatedLinearRegression(p["activation"], standardize=p["standardize"])
    if spec.family == "decision_tree":
        return RegressionTree(p["max_depth"], p["min_samples_split"])
    if spec.family == "random_forest":
        return RandomForest(p["n_estimators"], p["max_depth"], p["min_samples_split"], seed=spec.seed)
    if spec.family == "gradient_boosting":
        return GradientBoosting(p["n_estimators"], p["learning_rate"], p["max_depth"], p["min_samples_split"])
    return AdaBoostR2(p["n_estimators"], p["max_depth"], p["learning_rate"], seed=spec.seed)


def fit(spec: RegressorSpec, X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise RegressorError(f"need a nonempty 2-D feature matrix, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise RegressorError(f"{X.shape[0]} rows but {y.size} targets")
    return build(spec).fit(X, y)


def predict(model, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_features_:
        raise RegressorError(f"model expects {model.n_features_} features, got shape {X.shape}")
    return model.predict(X)


def linear_specs(seed: int | None = 0) -> list[RegressorSpec]:
    return [RegressorSpec("linear", {"activation": a.value}, seed) for a in Activation]


def paper_grid(seed: int | None = 0) -> list[RegressorSpec]:
    """All non-SVR rows of the published baseline table, in its row order."""
    specs = [RegressorSpec("knn", {"k": k}, seed) for k in (1, 3, 5, 7, 9)]
    specs += linear_specs(seed)
    specs.append(RegressorSpec("decision_tree", {}, seed))
    specs += [RegressorSpec("gradient_boosting", {"n_estimators": n}, seed) for n in (25, 50, 100, 200)]
    specs += [RegressorSpec("adaboost_r2", {"n_estimators": n}, seed) for n in (25, 50, 100, 200)]
    specs += [RegressorSpec("random_forest", {"n_estimators": n}, seed) for n in (25, 50, 100, 200)]
    return specs


def ablation_grid(seed: int | None = 0) -> list[RegressorSpec]:
    """The algorithms compared with and without feature selection (SVR excluded)."""
    return [
        RegressorSpec("knn", {"k": 3}, seed),
        RegressorSpec("linear", {"activation": "pow_quarter"}, seed),
        RegressorSpec("decision_tree", {}, seed),
        RegressorSpec("gradient_boosting", {"n_estimators": 200}, seed),
        RegressorSpec("adaboost_r2", {"n_estimators": 100}, seed),
        RegressorSpec("random_forest", {"n_estimators": 200}, seed),
    ]


def spec_by_label(label: str, seed: int | None = 0) -> RegressorSpec:
    for spec in paper_grid(seed):
        if spec.label == label:
            return spec
    raise RegressorError(f"no regressor labelled {label!r}")


__all__ = [
    "Activation", "ActivationDomainError", "NONLINEAR", "FAMILIES", "TREE_FAMILIES", "RegressorSpec",
    "RegressorError", "fit", "predict", "forward", "transform_targets", "paper_grid", "ablation_grid",
    "linear_specs", "spec_by_label", "build",
]
