"""Experiment grids: baseline, feature-selection ablation, extrapolation."""

from __future__ import annotations

import hashlib
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..dataset import LEVELS, Dataset, Split, feature_matrix, feature_names, make_split
from ..featsel import FeatureMask, SearchConfig, SearchTrace, check_budget, hill_climb
from ..metrics import DEFAULT_COST, CostFunction, EvalResult, evaluate, format_cell
from ..regressors import RegressorSpec, ablation_grid, fit, linear_specs, paper_grid, predict, spec_by_label

class ExtrapolationWarning(UserWarning):
    pass


class ConfigError(ValueError):
    """A run configuration that cannot be executed as requested."""


@dataclass(frozen=True)
class RunConfig:
    split_kind: str = "uniform"
    levels: tuple[int, ...] = LEVELS
    specs: tuple[RegressorSpec, ...] | None = None
    featsel: bool = False
    search: SearchConfig = SearchConfig()
    cost_variant: CostFunction = DEFAULT_COST
    seed: int = 0
    standardize: bool = True
    strict: bool = True
    jobs: int = 1
    force_trees: bool = False

    def __post_init__(self):
        if not self.levels:
            raise ConfigError("at least one level is required")
        object.__setattr__(self, "cost_variant", CostFunction(self.cost_variant))

    def to_dict(self) -> dict:
        return {
            "split_kind": self.split_kind,
            "levels": list(self.levels),
            "specs": None if self.specs is None else [s.to_dict() for s in self.specs],
            "featsel": self.featsel,
            "search": {"p": self.search.p, "branch": self.search.branch, "dedup": self.search.dedup},
            "cost_variant": self.cost_variant.value,
            "seed": self.seed,
            "standardize": self.standardize,
            "strict": self.strict,
            "force_trees": self.force_trees,
        }


@dataclass(frozen=True)
class ReportRow:
    label: str
    level: int
    split: str
    featsel: bool
    mae: float
    monotonicity: float
    violations: int
    n_test: int
    cost: float
    n_features: int
    mask: str | None = None
    selected: tuple[str, ...] | None = None

    @property
    def cell(self) -> str:
        return format_cell(self.mae, self.monotonicity, self.violations)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.label, "level": self.level, "split": self.split, "featsel": self.featsel,
            "mae": self.mae, "monotonicity": self.monotonicity, "violations": self.violations,
            "n_test": self.n_test, "cost": self.cost, "n_features": self.n_features, "mask": self.mask,
            "selected": None if self.selected is None else list(self.selected),
        }


@dataclass
class CellResult:
    row: ReportRow
    predictions: np.ndarray
    gt: np.ndarray
    trace: SearchTrace | None = None
    off_row: ReportRow | None = None


@dataclass
class Report:
    kind: str
    config: RunConfig
    split: Split
    cells: list[CellResult] = field(default_factory=list)

    @property
    def rows(self) -> list[ReportRow]:
        out = []
        for c in self.cells:
            if c.off_row is not None:
                out.append(c.off_row)
            out.append(c.row)
        return out


def derive_seed(global_seed: int, *coords) -> int:
    """64-bit seed from the global seed and a run coordinate, stable across processes."""
    key = "|".join([str(global_seed), *map(str, coords)]).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


def subset_evaluator(spec: RegressorSpec, X_train, y_train, X_test, y_test,
                     variant: CostFunction | str = DEFAULT_COST):
    """Callable scoring a feature mask by fitting on train and evaluating on test."""

    def evaluate_mask(mask: FeatureMask) -> EvalResult:
        cols = list(mask.indices)
        model = fit(spec, X_train[:, cols], y_train)
        return evaluate(predict(model, X_test[:, cols]), y_test, variant)

    return evaluate_mask


def _row(spec, level, split, featsel, res: EvalResult, n_features, mask=None, names=None) -> ReportRow:
    return ReportRow(
        label=spec.label, level=level, split=split, featsel=featsel, mae=res.mae,
        monotonicity=res.monotonicity, violations=res.violations, n_test=res.n_test, cost=res.cost,
        n_features=n_features, mask=None if mask is None else str(mask),
        selected=None if mask is None or names is None else tuple(names[i] for i in mask.indices),
    )


def run_cell(spec: RegressorSpec, level: int, split_kind: str, X_train, y_train, X_test, y_test,
             search: SearchConfig | None, variant: CostFunction, with_off: bool = False) -> CellResult:
    names = feature_names(level)
    n = X_train.shape[1]
    full = FeatureMask.full(n)
    evaluator = subset_evaluator(spec, X_train, y_train, X_test, y_test, variant)
    if search is None:
        model = fit(spec, X_train, y_train)
        pred = predict(model, X_test)
        res = evaluate(pred, y_test, variant)
        return CellResult(_row(spec, level, split_kind, False, res, n), pred, np.asarray(y_test))
    trace = hill_climb(evaluator, n, search, feature_names=names, label=f"{spec.label} | level {level}")
    mask, res = trace.best
    cols = list(mask.indices)
    pred = predict(fit(spec, X_train[:, cols], y_train), X_test[:, cols])
    row = _row(spec, level, split_kind, True, res, n, mask, names)
    off = None
    if with_off:
        full_res = next(r for m, r in trace.history if m == full)
        off = _row(spec, level, split_kind, False, full_res, n)
    return CellResult(row, pred, np.asarray(y_test), trace, off)


def _cell_job(args):
    return run_cell(*args)


def _prepare(spec: RegressorSpec, config: RunConfig, level: int) -> RegressorSpec:
    spec = spec.with_seed(derive_seed(config.seed, spec.label, level, config.split_kind))
    if spec.family in ("knn", "linear") and not config.standardize:
        spec = spec.with_params(standardize=False)
    return spec


def _run_grid(dataset: Dataset, config: RunConfig, specs: Sequence[RegressorSpec], kind: str,
              with_off: bool = False) -> Report:
    split = make_split(dataset, config.split_kind, strict=config.strict)
    tr, te = np.array(split.train_idx), np.array(split.test_idx)
    jobs = []
    for spec in specs:
        for level in config.levels:
            X, y = feature_matrix(dataset, level)
            s = _prepare(spec, config, level)
            search = None
            if config.featsel:
                search = replace(config.search, cost_variant=config.cost_variant,
                                 seed=derive_seed(config.seed, "featsel", spec.label, level, config.split_kind))
            jobs.append((s, level, config.split_kind, X[tr], y[tr], X[te], y[te], search,
                         config.cost_variant, with_off))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            cells = list(pool.map(_cell_job, jobs))
    else:
        cells = [_cell_job(j) for j in jobs]
    for c in cells:
        if c.trace is not None:
            check_budget(c.trace)
    return Report(kind, config, split, cells)


def run_baseline(dataset: Dataset, config: RunConfig) -> Report:
    if config.split_kind != "uniform":
        raise ConfigError("the baseline runs on the uniform split")
    specs = config.specs if config.specs is not None else tuple(paper_grid(config.seed))
    return _run_grid(dataset, config, specs, "baseline")


def run_ablation(dataset: Dataset, config: RunConfig) -> Report:
    """Every cell with all features and with the selected subset, from one search."""
    if config.split_kind != "uniform":
        raise ConfigError("the ablation runs on the uniform split")
    specs = config.specs if config.specs is not None else tuple(ablation_grid(config.seed))
    return _run_grid(dataset, replace(config, featsel=True), specs, "ablation", with_off=True)


def run_extrapolation(dataset: Dataset, config: RunConfig) -> Report:
    if config.split_kind not in ("left", "right", "dual"):
        raise ConfigError(f"extrapolation needs a left/right/dual split, got {config.split_kind!r}")
    specs = config.specs if config.specs is not None else tuple(linear_specs(config.seed))
    trees = [s.label for s in specs if s.is_tree]
    if trees:
        msg = f"tree-based regressors cannot extrapolate beyond the training targets: {trees}"
        if not config.force_trees:
            raise ConfigError(msg + " (use --force-trees or force_trees=True to run them anyway)")
        warnings.warn(msg, ExtrapolationWarning, stacklevel=2)
    return _run_grid(dataset, config, specs, f"extrapolation-{config.split_kind}")


def specs_from_labels(labels: Sequence[str], seed: int = 0) -> tuple[RegressorSpec, ...]:
    return tuple(spec_by_label(l, seed) for l in labels)
