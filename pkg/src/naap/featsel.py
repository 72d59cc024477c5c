"""Budgeted best-first hill climbing over feature subsets.

The search starts from the full feature set and walks single-feature flips.
Every evaluated subset pushes its neighbours onto a min-priority queue keyed
by its own cost; each descent step pops the whole group of entries sharing
the lowest priority. Groups larger than ``branch * n_features`` are sampled
down and the remainder goes back into the queue untouched. The search stops
after ``p * n_features`` descent steps or when the queue runs dry.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .metrics import DEFAULT_COST, CostFunction, EvalResult

MAX_EXHAUSTIVE_FEATURES = 16


@dataclass(frozen=True, order=False)
class FeatureMask:
    """Nonempty subset of ``n`` features; bit ``i`` of ``bits`` selects feature ``i``."""

    bits: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("mask needs at least one feature slot")
        if self.bits <= 0 or self.bits >= 1 << self.n:
            raise ValueError(f"invalid mask bits {self.bits} for {self.n} features")

    @classmethod
    def full(cls, n: int) -> "FeatureMask":
        return cls((1 << n) - 1, n)

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "FeatureMask":
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(bits, n)

    @classmethod
    def from_string(cls, s: str) -> "FeatureMask":
        return cls.from_indices((i for i, c in enumerate(s) if c == "1"), len(s))

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.bits >> i & 1)

    @property
    def size(self) -> int:
        return bin(self.bits).count("1")

    def as_bool(self) -> np.ndarray:
        return np.array([i in self for i in range(self.n)], dtype=bool)

    def sort_key(self) -> tuple[int, ...]:
        return self.indices


def neighbors(mask: FeatureMask) -> list[FeatureMask]:
    """All masks one flip away, ascending by flipped index, empty mask excluded."""
    out = []
    for i in range(mask.n):
        bits = mask.bits ^ (1 << i)
        if bits:
            out.append(FeatureMask(bits, mask.n))
    return out


@dataclass(frozen=True)
class SearchConfig:
    p: float = 1.0
    branch: int = 3
    cost_variant: CostFunction = DEFAULT_COST
    seed: int = 0
    dedup: bool = True

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("p must be positive")
        if self.branch < 1:
            raise ValueError("branch must be >= 1")
        object.__setattr__(self, "cost_variant", CostFunction(self.cost_variant))

    def step_limit(self, n_features: int) -> int:
        return math.floor(self.p * n_features)

    def eval_cap(self, n_features: int) -> int:
        return self.branch * n_features

    def evaluation_bound(self, n_features: int) -> int:
        return 1 + self.step_limit(n_features) * self.eval_cap(n_features)


@dataclass(frozen=True)
class StepLog:
    step: int
    priority: float
    dequeued: int
    evaluated: tuple[str, ...]
    pruned: int


@dataclass
class SearchTrace:
    n_features: int
    config: SearchConfig
    history: list[tuple[FeatureMask, EvalResult]] = field(default_factory=list)
    steps: list[StepLog] = field(default_factory=list)
    best: tuple[FeatureMask, EvalResult] | None = None
    feature_names: tuple[str, ...] | None = None
    label: str = ""

    @property
    def evaluations(self) -> dict[FeatureMask, EvalResult]:
        return dict(self.history)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def record(self, mask: FeatureMask, result: EvalResult) -> None:
        self.history.append((mask, result))
        if self.best is None or result.cost < self.best[1].cost:
            self.best = (mask, result)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n_features": self.n_features,
            "feature_names": list(self.feature_names) if self.feature_names else None,
            "config": {
                "p": self.config.p, "branch": self.config.branch,
                "cost_variant": self.config.cost_variant.value, "seed": self.config.seed,
                "dedup": self.config.dedup,
            },
            "evaluations": [{"mask": str(m), **r.to_dict()} for m, r in self.history],
            "steps": [
                {"step": s.step, "priority": s.priority, "dequeued": s.dequeued,
                 "evaluated": list(s.evaluated), "pruned": s.pruned}
                for s in self.steps
            ],
            "best": None if self.best is None else {"mask": str(self.best[0]), **self.best[1].to_dict()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "SearchTrace":
        cfg = SearchConfig(**{**d["config"], "cost_variant": CostFunction(d["config"]["cost_variant"])})
        tr = cls(n_features=d["n_features"], config=cfg, label=d.get("label", ""),
                 feature_names=tuple(d["feature_names"]) if d.get("feature_names") else None)
        for e in d["evaluations"]:
            tr.record(FeatureMask.from_string(e["mask"]), EvalResult.from_dict(e))
        tr.steps = [StepLog(s["step"], s["priority"], s["dequeued"], tuple(s["evaluated"]), s["pruned"])
                    for s in d["steps"]]
        return tr


class SearchAborted(RuntimeError):
    """The evaluator raised; ``trace`` holds everything evaluated before the failure."""

    def __init__(self, message: str, trace: SearchTrace):
        super().__init__(message)
        self.trace = trace


Evaluator = Callable[[FeatureMask], EvalResult]
MapFn = Callable[[Callable, Sequence], Iterable]


def _evaluate_all(evaluator: Evaluator, masks: list[FeatureMask], map_fn: MapFn | None, trace: SearchTrace):
    try:
        results = list((map_fn or map)(evaluator, masks))
    except Exception as exc:
        raise SearchAborted(f"evaluator failed: {exc}", trace) from exc
    return results


def hill_climb(
    evaluator: Evaluator,
    n_features: int,
    config: SearchConfig = SearchConfig(),
    map_fn: MapFn | None = None,
    feature_names: Sequence[str] | None = None,
    label: str = "",
) -> SearchTrace:
    """Run the budgeted search.

    ``map_fn`` may be any order-preserving map (e.g. an executor's ``map``)
    used to evaluate the subsets of one descent step; results are merged in
    mask order, so the trace does not depend on it.
    """
    if n_features < 1:
        raise ValueError("need at least one feature")
    rng = np.random.default_rng(config.seed)
    trace = SearchTrace(n_features, config, feature_names=tuple(feature_names) if feature_names else None,
                        label=label)
    counter = itertools.count()
    queue: list[tuple[float, int, FeatureMask]] = []
    visited: set[FeatureMask] = set()
    max_steps = config.step_limit(n_features)
    cap = config.eval_cap(n_features)

    def expand(masks: list[FeatureMask], results: list[EvalResult]) -> None:
        for mask, res in sorted(zip(masks, results), key=lambda mr: mr[0].sort_key()):
            trace.record(mask, res)
            visited.add(mask)
        for mask, res in sorted(zip(masks, results), key=lambda mr: mr[0].sort_key()):
            for nb in neighbors(mask):
                if config.dedup and nb in visited:
                    continue
                heapq.heappush(queue, (res.cost, next(counter), nb))

    root = FeatureMask.full(n_features)
    expand([root], _evaluate_all(evaluator, [root], map_fn, trace))

    while queue and trace.n_steps < max_steps:
        priority = queue[0][0]
        group = []
        while queue and queue[0][0] == priority:
            group.append(heapq.heappop(queue))
        n_dequeued = len(group)
        if config.dedup:
            seen: set[FeatureMask] = set()
            kept = []
            for entry in group:
                if entry[2] in visited or entry[2] in seen:
                    continue
                seen.add(entry[2])
                kept.append(entry)
            group = kept
        if not group:
            continue
        pruned = 0
        if len(group) > cap:
            chosen = np.sort(rng.choice(len(group), size=cap, replace=False))
            keep = set(chosen.tolist())
            for k, entry in enumerate(group):
                if k not in keep:
                    heapq.heappush(queue, entry)
            pruned = len(group) - cap
            group = [group[k] for k in chosen]
        masks = [entry[2] for entry in group]
        results = _evaluate_all(evaluator, masks, map_fn, trace)
        trace.steps.append(StepLog(trace.n_steps + 1, priority, n_dequeued,
                                   tuple(str(m) for m in sorted(masks, key=FeatureMask.sort_key)), pruned))
        expand(masks, results)
    return trace


def check_budget(trace: SearchTrace) -> None:
    """Raise if a trace broke the step or evaluation budget."""
    cfg, n = trace.config, trace.n_features
    if trace.n_steps > cfg.step_limit(n):
        raise RuntimeError(f"{trace.n_steps} descent steps exceed the limit {cfg.step_limit(n)}")
    if len(trace.history) > cfg.evaluation_bound(n):
        raise RuntimeError(f"{len(trace.history)} evaluations exceed the bound {cfg.evaluation_bound(n)}")


def exhaustive_search(evaluator: Callable[[FeatureMask], EvalResult | float], n_features: int):
    """Evaluate every nonempty subset; returns (best mask, {mask: result}).

    Ties go to the smaller subset, then to the lexicographically smaller
    sorted index tuple.
    """
    if not 1 <= n_features <= MAX_EXHAUSTIVE_FEATURES:
        raise ValueError(f"exhaustive search supports 1..{MAX_EXHAUSTIVE_FEATURES} features, got {n_features}")
    table = {mask: evaluator(mask) for mask in iter_masks(n_features)}

    def key(mask):
        r = table[mask]
        return (r.cost if isinstance(r, EvalResult) else r, mask.size, mask.sort_key())

    return min(table, key=key), table


def _top_masks(pairs: list[tuple[FeatureMask, float]], top_fraction: float) -> list[FeatureMask]:
    keep = math.ceil(top_fraction * len(pairs))
    ranked = sorted(range(len(pairs)), key=lambda k: (pairs[k][1], k))
    return [pairs[k][0] for k in ranked[:keep]]


def feature_importance(traces: Sequence[SearchTrace], top_fraction: float = 0.08) -> np.ndarray:
    """Share of the best ``top_fraction`` of evaluated subsets that contain each feature.

    All traces must cover the same feature space; their evaluations are pooled.
    """
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    pairs = [(m, r.cost) for t in traces for m, r in t.history]
    if not pairs:
        raise ValueError("no evaluations to pool")
    n = {m.n for m, _ in pairs}
    if len(n) != 1:
        raise ValueError("traces cover different feature counts; use feature_importance_by_name")
    kept = _top_masks(pairs, top_fraction)
    return np.mean([m.as_bool() for m in kept], axis=0)


def feature_importance_by_name(traces: Sequence[SearchTrace], top_fraction: float = 0.08) -> dict[str, float]:
    """Pool traces over different feature spaces (e.g. several epoch levels).

    Features are aligned by name; a feature's rate is taken over the kept
    subsets whose feature space includes it.
    """
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    pairs, names = [], []
    for t in traces:
        if t.feature_names is None:
            raise ValueError("traces need feature names to be pooled by name")
        for m, r in t.history:
            pairs.append((m, r.cost))
            names.append(t.feature_names)
    if not pairs:
        raise ValueError("no evaluations to pool")
    keep = math.ceil(top_fraction * len(pairs))
    ranked = sorted(range(len(pairs)), key=lambda k: (pairs[k][1], k))[:keep]
    hits: dict[str, int] = {}
    totals: dict[str, int] = {}
    order: list[str] = []
    for k in ranked:
        mask, fnames = pairs[k][0], names[k]
        for i, name in enumerate(fnames):
            if name not in totals:
                totals[name] = hits[name] = 0
                order.append(name)
            totals[name] += 1
            hits[name] += i in mask
    return {name: hits[name] / totals[name] for name in order}


def iter_masks(n_features: int) -> Iterator[FeatureMask]:
    for bits in range(1, 1 << n_features):
        yield FeatureMask(bits, n_features)
