"""Output activations for linear regression and their target-side inverses.

Fitting ``y ~ f(x.w)`` is reduced to ordinary least squares on ``f^-1(y)``.
"""

from __future__ import annotations

import enum
import logging

import numpy as np

log = logging.getLogger(__name__)

EPS = 1e-6


class ActivationDomainError(ValueError):
    pass


class Activation(str, enum.Enum):
    IDENTITY = "identity"
    POW_HALF = "pow_half"
    POW_QUARTER = "pow_quarter"
    POW_TWO = "pow_two"
    EXP = "exp"
    LOG = "log"
    SIGMOID = "sigmoid"

    @property
    def exponent(self) -> float | None:
        return _EXPONENTS.get(self)

    @property
    def label(self) -> str:
        return _LABELS[self]


_EXPONENTS = {Activation.POW_HALF: 0.5, Activation.POW_QUARTER: 0.25, Activation.POW_TWO: 2.0}
_LABELS = {
    Activation.IDENTITY: "Linear Regression",
    Activation.POW_HALF: "Linear Regression (D=0.5)",
    Activation.POW_QUARTER: "Linear Regression (D=0.25)",
    Activation.POW_TWO: "Linear Regression (D=2)",
    Activation.EXP: "Linear Regression (Exp)",
    Activation.LOG: "Linear Regression (Log)",
    Activation.SIGMOID: "Linear Regression (Sigmoid)",
}
NONLINEAR = tuple(a for a in Activation if a is not Activation.IDENTITY)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(act: Activation | str, z) -> np.ndarray:
    """Apply ``f`` to linear scores.

    Scores outside the natural domain are clipped to its boundary: the base of
    a fractional power at 0, the argument of log at the smallest positive
    float, the argument of exp below overflow.
    """
    act = Activation(act)
    z = np.asarray(z, dtype=float)
    if act is Activation.IDENTITY:
        return z.copy()
    if act.exponent is not None:
        base = z + 1.0
        if act.exponent != int(act.exponent):
            base = np.maximum(base, 0.0)
        return base ** act.exponent
    if act is Activation.EXP:
        return np.exp(np.minimum(z, 700.0))
    if act is Activation.LOG:
        return np.log(np.maximum(z, np.finfo(float).tiny))
    return _sigmoid(z)


def _check_range(y: np.ndarray, lo: float, hi: float, act: Activation) -> None:
    bad = np.flatnonzero(~((y >= lo) & (y <= hi)))
    if bad.size:
        i = int(bad[0])
        raise ActivationDomainError(
            f"target at index {i} ({y[i]!r}) outside the invertible range of {act.value}"
        )


def transform_targets(act: Activation | str, y, eps: float = EPS) -> np.ndarray:
    """Return ``f^-1(y)``.

    Targets on the boundary of the domain (0 for exp, 0 and 1 for sigmoid)
    are clamped by ``eps`` first; anything further out is an error.
    """
    act = Activation(act)
    y = np.asarray(y, dtype=float)
    if act is Activation.IDENTITY or act is Activation.LOG:
        _check_range(y, -np.inf, np.inf, act)
        return y.copy() if act is Activation.IDENTITY else np.exp(y)
    if act.exponent is not None:
        _check_range(y, 0.0, np.inf, act)
        return y ** (1.0 / act.exponent) - 1.0
    if act is Activation.EXP:
        _check_range(y, 0.0, np.inf, act)
        clamped = np.maximum(y, eps)
        if np.any(clamped != y):
            log.info("clamped %d targets to %g before log", int(np.sum(clamped != y)), eps)
        return np.log(clamped)
    _check_range(y, 0.0, 1.0, act)
    clamped = np.clip(y, eps, 1.0 - eps)
    if np.any(clamped != y):
        log.info("clamped %d targets into [%g, 1-%g] before logit", int(np.sum(clamped != y)), eps, eps)
    return np.log(clamped) - np.log1p(-clamped)
