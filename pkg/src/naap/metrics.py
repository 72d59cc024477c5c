"""Error and ranking metrics used to score accuracy predictors.

Predictions are judged on two axes: mean absolute error and pairwise
monotonicity, i.e. how many test pairs the predictor orders differently from
the ground truth. Feature selection folds both into one scalar cost.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np


class MetricError(ValueError):
    pass


class CostFunction(str, enum.Enum):
    PRODUCT = "product"
    LOG = "log"
    SQRT = "sqrt"
    SQRT_ROUNDED = "sqrt_rounded"


DEFAULT_COST = CostFunction.SQRT_ROUNDED


@dataclass(frozen=True)
class EvalResult:
    mae: float
    violations: int
    n_test: int
    monotonicity: float
    cost: float

    @property
    def violation_rate(self) -> float:
        return self.violations / math.comb(self.n_test, 2)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvalResult":
        return cls(
            mae=float(d["mae"]),
            violations=int(d["violations"]),
            n_test=int(d["n_test"]),
            monotonicity=float(d["monotonicity"]),
            cost=float(d["cost"]),
        )

    @property
    def cell(self) -> str:
        """Table cell in the ``MAE / Monotonicity / #Violations`` style."""
        return format_cell(self.mae, self.monotonicity, self.violations)


def format_cell(mae: float, monotonicity: float, violations: int) -> str:
    return f"{round_half_up(mae, 3):.3f} / {round_half_up(monotonicity, 3):.3f} / {violations}"


def round_half_up(x: float, ndigits: int = 3) -> float:
    """Round half away from zero on the decimal representation of ``x``."""
    q = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def _pair(pred, gt) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=float).ravel()
    gt = np.asarray(gt, dtype=float).ravel()
    if pred.shape != gt.shape:
        raise MetricError(f"length mismatch: {pred.size} predictions vs {gt.size} targets")
    if not (np.all(np.isfinite(pred)) and np.all(np.isfinite(gt))):
        raise MetricError("predictions and targets must be finite")
    return pred, gt


def mae(pred: Sequence[float], gt: Sequence[float]) -> float:
    pred, gt = _pair(pred, gt)
    if pred.size == 0:
        raise MetricError("mae of empty sequences")
    return float(np.mean(np.abs(pred - gt)))


def count_violations_bruteforce(pred: Sequence[float], gt: Sequence[float]) -> int:
    """O(N^2) reference count of discordant pairs."""
    pred, gt = _pair(pred, gt)
    n = pred.size
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if np.sign(gt[i] - gt[j]) * np.sign(pred[i] - pred[j]) < 0:
                count += 1
    return count


def _merge_count(values: list[float]) -> tuple[list[float], int]:
    # counts pairs i<j with values[i] > values[j]; equal values are not inversions
    n = len(values)
    if n <= 1:
        return values, 0
    mid = n // 2
    left, a = _merge_count(values[:mid])
    right, b = _merge_count(values[mid:])
    merged = []
    inv = a + b
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            inv += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inv


def count_violations(pred: Sequence[float], gt: Sequence[float]) -> int:
    """Number of index pairs whose predicted order contradicts the ground-truth order.

    Pairs tied in either sequence never count. Runs in O(N log N): sort by
    (gt, pred) so that gt ties are ordered ascending in pred and therefore
    contribute no inversions, then count strict inversions of pred.
    """
    pred, gt = _pair(pred, gt)
    if pred.size < 2:
        raise MetricError("need at least two samples to count violations")
    order = np.lexsort((pred, gt))
    _, inv = _merge_count(pred[order].tolist())
    return inv


def monotonicity_score(violations: int, n_test: int) -> float:
    if n_test < 2:
        raise MetricError("monotonicity needs n_test >= 2")
    pairs = math.comb(n_test, 2)
    if not 0 <= violations <= pairs:
        raise MetricError(f"{violations} violations out of range for {pairs} pairs")
    return 1.0 - violations / pairs


def cost(mae: float, violation_rate: float, variant: CostFunction | str = DEFAULT_COST) -> float:
    variant = CostFunction(variant)
    if mae < 0:
        raise MetricError("mae must be nonnegative")
    if not 0.0 <= violation_rate <= 1.0:
        raise MetricError(f"violation rate {violation_rate} outside [0, 1]")
    if variant is CostFunction.PRODUCT:
        return mae * violation_rate
    if variant is CostFunction.LOG:
        if violation_rate == 0:
            raise MetricError("log cost undefined for a zero violation rate")
        return mae * math.log(violation_rate)
    if variant is CostFunction.SQRT:
        return mae * math.sqrt(violation_rate)
    return round_half_up(mae, 3) * math.sqrt(violation_rate)


def evaluate(pred, gt, variant: CostFunction | str = DEFAULT_COST) -> EvalResult:
    pred, gt = _pair(pred, gt)
    m = mae(pred, gt)
    v = count_violations(pred, gt)
    n = pred.size
    return EvalResult(
        mae=m,
        violations=v,
        n_test=n,
        monotonicity=monotonicity_score(v, n),
        cost=cost(m, v / math.comb(n, 2), variant),
    )
