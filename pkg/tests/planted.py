"""Planted feature-selection problems shared by the search tests."""

import numpy as np

from naap.dataset import SyntheticSpec, generate_synthetic
from naap.harness.runs import subset_evaluator
from naap.regressors import RegressorSpec

LINEAR = RegressorSpec("linear", {"activation": "identity"})


def planted_problem(seed, n_informative=3, n_distractor=5, n_train=30, n_test=40, noise_sd=0.01,
                    spec=LINEAR, variant="sqrt_rounded"):
    """Evaluator over a synthetic table whose informative columns are known."""
    data = generate_synthetic(SyntheticSpec(n_samples=n_train + n_test, n_informative=n_informative,
                                            n_distractor=n_distractor, noise_sd=noise_sd, seed=seed))
    X, y = data.X, data.y
    evaluator = subset_evaluator(spec, X[:n_train], y[:n_train], X[n_train:], y[n_train:], variant)
    return evaluator, np.array(data.informative)
