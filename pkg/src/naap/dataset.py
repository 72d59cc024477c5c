"""NAAP-440e table: loading, feature matrices, accuracy bins and splits.

The CSV has one row per architecture::

    id, depth, num_stages, first_width, last_width, num_params, num_macs,
    num_skip_connections, num_lost_rf_layers,
    epoch{1..9}_train_loss, epoch{1..9}_train_acc, epoch{1..9}_test_acc,
    gt_accuracy

Columns are matched by header name, so their order in the file is free.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .scheme import (
    ORIGINAL_FEATURES,
    SCHEME_FEATURES,
    ArchitectureScheme,
    SchemeFeatures,
    naap_generation_grid,
    scheme_feature_vector,
)

log = logging.getLogger(__name__)

LEVELS = (0, 3, 6, 9)
EPOCH_FIELDS = ("train_loss", "train_acc", "test_acc")
SPLIT_KINDS = ("uniform", "left", "right", "dual")
STRICT_N_RECORDS = 440
STRICT_N_BINS = 40

# Alternative header spellings -> canonical column name. Only the canonical
# names are known for certain; callers may pass extra aliases to load_csv.
COLUMN_ALIASES: dict[str, str] = {}


class DataError(ValueError):
    """Input data violates the table schema or a split precondition."""


@dataclass(frozen=True)
class EpochMetrics:
    train_loss: float
    train_accuracy: float
    test_accuracy: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.train_loss, self.train_accuracy, self.test_accuracy)


@dataclass(frozen=True)
class ArchRecord:
    id: str
    scheme: SchemeFeatures
    epochs: tuple[EpochMetrics, ...]
    gt_accuracy: float

    def __post_init__(self):
        if not 0.0 <= self.gt_accuracy <= 1.0:
            raise DataError(f"record {self.id}: gt_accuracy {self.gt_accuracy} outside [0, 1]")


def epoch_columns(level: int) -> list[str]:
    return [f"epoch{e}_{f}" for e in range(1, level + 1) for f in EPOCH_FIELDS]


def feature_names(level: int) -> list[str]:
    return list(SCHEME_FEATURES) + epoch_columns(level)


@dataclass(frozen=True)
class Dataset:
    records: tuple[ArchRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def gt(self) -> np.ndarray:
        return np.array([r.gt_accuracy for r in self.records], dtype=float)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    @property
    def max_level(self) -> int:
        return min((len(r.epochs) for r in self.records), default=0)

    def feature_names(self, level: int) -> list[str]:
        return feature_names(level)


def _parse_number(text: str, line: int, column: str, integer: bool = False):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise DataError(f"line {line}, column {column!r}: non-numeric value {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"line {line}, column {column!r}: non-finite value {text!r}")
    if integer:
        if value != int(value) or value < 0:
            raise DataError(f"line {line}, column {column!r}: expected a nonnegative integer, got {text!r}")
        return int(value)
    return value


def _in_unit(value: float, line: int, column: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise DataError(f"line {line}, column {column!r}: value {value} outside [0, 1]")
    return value


def load_csv(path: str | Path, aliases: Mapping[str, str] | None = None) -> Dataset:
    table = {**COLUMN_ALIASES, **(aliases or {})}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        names = [table.get(h.strip(), h.strip()) for h in header]
        col = {name: i for i, name in enumerate(names)}

        missing_new = [c for c in SCHEME_FEATURES[6:] if c not in col]
        if missing_new and all(c in col for c in ORIGINAL_FEATURES):
            raise DataError(
                f"{path}: columns {missing_new} missing; this looks like an original 6-feature "
                "table, run `naap extend` with the schemes file to add them"
            )
        for c in ("id", *SCHEME_FEATURES, "gt_accuracy"):
            if c not in col:
                raise DataError(f"{path}: missing column {c!r}")
        n_epochs = 0
        while all(f"epoch{n_epochs + 1}_{f}" in col for f in EPOCH_FIELDS):
            n_epochs += 1

        records = []
        for line, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(names):
                raise DataError(f"line {line}: expected {len(names)} cells, got {len(row)}")
            scheme = SchemeFeatures(
                **{c: _parse_number(row[col[c]], line, c, integer=True) for c in SCHEME_FEATURES}
            )
            epochs = []
            for e in range(1, n_epochs + 1):
                loss_c, tr_c, te_c = (f"epoch{e}_{f}" for f in EPOCH_FIELDS)
                loss = _parse_number(row[col[loss_c]], line, loss_c)
                if loss < 0:
                    raise DataError(f"line {line}, column {loss_c!r}: negative loss {loss}")
                epochs.append(
                    EpochMetrics(
                        loss,
                        _in_unit(_parse_number(row[col[tr_c]], line, tr_c), line, tr_c),
                        _in_unit(_parse_number(row[col[te_c]], line, te_c), line, te_c),
                    )
                )
            gt = _in_unit(_parse_number(row[col["gt_accuracy"]], line, "gt_accuracy"), line, "gt_accuracy")
            records.append(ArchRecord(row[col["id"]].strip(), scheme, tuple(epochs), gt))
    if not records:
        raise DataError(f"{path}: no data rows")
    return Dataset(tuple(records))


def write_csv(dataset: Dataset, path: str | Path) -> None:
    level = dataset.max_level
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *SCHEME_FEATURES, *epoch_columns(level), "gt_accuracy"])
        for r in dataset.records:
            cells = [r.id, *r.scheme.as_tuple()]
            for ep in r.epochs[:level]:
                cells.extend(repr(v) for v in ep.as_tuple())
            cells.append(repr(r.gt_accuracy))
            w.writerow(cells)


def feature_matrix(dataset: Dataset, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Scheme features followed by (loss, train acc, test acc) for epochs 1..level."""
    if level < 0:
        raise DataError(f"level must be nonnegative, got {level}")
    X = np.empty((len(dataset), len(SCHEME_FEATURES) + 3 * level), dtype=float)
    for i, r in enumerate(dataset.records):
        if len(r.epochs) < level:
            raise DataError(f"record {r.id}: has {len(r.epochs)} epochs, level {level} requested")
        X[i, : len(SCHEME_FEATURES)] = r.scheme.as_tuple()
        for e, ep in enumerate(r.epochs[:level]):
            X[i, len(SCHEME_FEATURES) + 3 * e : len(SCHEME_FEATURES) + 3 * e + 3] = ep.as_tuple()
    return X, dataset.gt


@dataclass(frozen=True)
class Split:
    train_idx: tuple[int, ...]
    test_idx: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in SPLIT_KINDS:
            raise DataError(f"unknown split kind {self.kind!r}")
        if set(self.train_idx) & set(self.test_idx):
            raise DataError("train and test indices overlap")

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "train": list(self.train_idx), "test": list(self.test_idx)})

    @classmethod
    def from_json(cls, text: str) -> "Split":
        d = json.loads(text)
        return cls(tuple(int(i) for i in d["train"]), tuple(int(i) for i in d["test"]), d["kind"])


def _gt_array(source: Dataset | Sequence[float]) -> np.ndarray:
    return source.gt if isinstance(source, Dataset) else np.asarray(source, dtype=float)


def bin_by_accuracy(source: Dataset | Sequence[float], n_bins: int = STRICT_N_BINS) -> list[list[int]]:
    """Sort by accuracy (ties by row index) and cut into equal consecutive bins, lowest first."""
    gt = _gt_array(source)
    n = gt.size
    if n_bins < 1 or n % n_bins:
        raise DataError(f"{n} records cannot be split into {n_bins} equal bins")
    order = np.lexsort((np.arange(n), gt))
    size = n // n_bins
    return [order[b * size : (b + 1) * size].tolist() for b in range(n_bins)]


def _split_bins(bins: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    train, test = [], []
    for b, members in enumerate(bins, start=1):
        if len(members) % 2 == 0:
            raise DataError(f"bin {b} has even size {len(members)}; the centre sample is undefined")
        mid = (len(members) - 1) // 2
        test.append(members[mid])
        train.append([m for k, m in enumerate(members) if k != mid])
    return train, test


def uniform_split(bins: Sequence[Sequence[int]]) -> Split:
    train, test = _split_bins(bins)
    return Split(tuple(i for t in train for i in t), tuple(test), "uniform")


def extrapolation_split(bins: Sequence[Sequence[int]], kind: str, strict: bool = True) -> Split:
    """Left, right or dual extrapolation split over the uniform split's bins.

    With 40 bins: left trains on bins 21-40 and tests on 1-20, right is the
    mirror image, dual trains on bins 11-30 and tests on 1-10 and 31-40.
    Non-strict mode scales the same halves/quarters to any bin count
    divisible by four.
    """
    n = len(bins)
    if strict and n != STRICT_N_BINS:
        raise DataError(f"strict mode needs {STRICT_N_BINS} bins, got {n}")
    if n % 4:
        raise DataError(f"bin count {n} is not divisible by 4")
    train, test = _split_bins(bins)
    half, quarter = n // 2, n // 4
    if kind == "left":
        tr, te = range(half, n), range(0, half)
    elif kind == "right":
        tr, te = range(0, half), range(half, n)
    elif kind == "dual":
        tr = range(quarter, n - quarter)
        te = [*range(0, quarter), *range(n - quarter, n)]
    else:
        raise DataError(f"unknown extrapolation kind {kind!r}")
    return Split(tuple(i for b in tr for i in train[b]), tuple(test[b] for b in te), kind)


def make_split(dataset: Dataset | Sequence[float], kind: str, strict: bool = True) -> Split:
    gt = _gt_array(dataset)
    if strict and gt.size != STRICT_N_RECORDS:
        raise DataError(f"strict mode needs {STRICT_N_RECORDS} records, got {gt.size}")
    n_bins = STRICT_N_BINS if strict else _permissive_bins(gt.size)
    bins = bin_by_accuracy(gt, n_bins)
    if kind == "uniform":
        return uniform_split(bins)
    return extrapolation_split(bins, kind, strict=strict)


def _permissive_bins(n: int) -> int:
    # largest multiple of 4 bins with odd bin size
    for n_bins in range(min(STRICT_N_BINS, n), 3, -1):
        if n_bins % 4 == 0 and n % n_bins == 0 and (n // n_bins) % 2 == 1:
            return n_bins
    raise DataError(f"no valid bin layout for {n} records")


# ---------------------------------------------------------------------------
# synthetic data


@dataclass(frozen=True)
class SyntheticSpec:
    n_samples: int = 200
    n_informative: int = 3
    n_distractor: int = 5
    target_fn: str | Callable[[np.ndarray], np.ndarray] = "linear"
    noise_sd: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class SyntheticData:
    """Flat synthetic regression table with a known set of informative columns."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    informative: tuple[bool, ...]
    coef: np.ndarray = field(repr=False)


def _linear_target(Z: np.ndarray, coef: np.ndarray) -> np.ndarray:
    return 0.5 + 0.08 * Z @ coef


_TARGETS = {
    "linear": _linear_target,
    "sigmoid": lambda Z, c: 1.0 / (1.0 + np.exp(-(Z @ c))),
    "quadratic": lambda Z, c: 0.3 + 0.05 * (Z @ c + 3.0) ** 2 / 4.0,
}


def generate_synthetic(spec: SyntheticSpec) -> SyntheticData:
    if min(spec.n_samples, spec.n_informative, spec.n_distractor) < 0:
        raise DataError("synthetic counts must be nonnegative")
    rng = np.random.default_rng(spec.seed)
    n_feat = spec.n_informative + spec.n_distractor
    X = rng.standard_normal((spec.n_samples, n_feat))
    informative_cols = np.sort(rng.permutation(n_feat)[: spec.n_informative])
    mask = np.zeros(n_feat, dtype=bool)
    mask[informative_cols] = True
    coef = rng.uniform(0.5, 1.5, spec.n_informative) * rng.choice([-1.0, 1.0], spec.n_informative)
    if callable(spec.target_fn):
        y = np.asarray(spec.target_fn(X[:, mask]), dtype=float)
    else:
        y = _TARGETS[spec.target_fn](X[:, mask], coef)
    if spec.noise_sd > 0:
        y = y + rng.normal(0.0, spec.noise_sd, spec.n_samples)
    y = np.clip(y, 0.0, 1.0)
    names = tuple(f"x{i}" for i in range(n_feat))
    return SyntheticData(X=X, y=y, feature_names=names, informative=tuple(mask.tolist()), coef=coef)


def synthetic_naap(n: int = STRICT_N_RECORDS, seed: int = 0, n_epochs: int = 9) -> tuple[Dataset, list[ArchitectureScheme]]:
    """A NAAP-440e-shaped table built from the scheme generation grid.

    Ground truth grows with capacity and drops with every layer that loses
    receptive field; early-epoch curves are noisy views of the final
    accuracy. Accuracies are continuous, hence distinct with probability one.
    Returns the dataset together with the sampled schemes.
    """
    rng = np.random.default_rng(seed)
    grid = list(naap_generation_grid())
    if n > len(grid):
        raise DataError(f"at most {len(grid)} distinct schemes available, asked for {n}")
    picked = sorted(rng.choice(len(grid), size=n, replace=False).tolist())
    schemes = []
    records = []
    for k, g in enumerate(picked):
        src = grid[g]
        scheme = ArchitectureScheme(f"arch_{k:03d}", src.layers, src.input_resolution, src.input_channels)
        feats = scheme_feature_vector(scheme)
        quality = (
            0.55 * math.log(feats.num_params / 1e4)
            + 0.25 * math.log(feats.num_macs / 1e6)
            - 0.6 * feats.num_lost_rf_layers
            + 0.3 * feats.num_skip_connections
            + rng.normal(0.0, 0.25)
        )
        gt = 0.62 + 0.3 / (1.0 + math.exp(-(quality - 0.8)))
        speed = 2.0 + rng.uniform(0.0, 2.0)
        epochs = []
        for e in range(1, n_epochs + 1):
            progress = 1.0 - math.exp(-e / speed)
            test_acc = float(np.clip(gt * (0.55 + 0.43 * progress) + rng.normal(0.0, 0.01), 0.0, 1.0))
            train_acc = float(np.clip(test_acc + 0.02 * progress + rng.normal(0.0, 0.005), 0.0, 1.0))
            loss = float(max(-math.log(max(train_acc, 1e-6)) * 1.3 + rng.normal(0.0, 0.01), 0.0))
            epochs.append(EpochMetrics(loss, train_acc, test_acc))
        schemes.append(scheme)
        records.append(ArchRecord(scheme.name, feats, tuple(epochs), float(gt)))
    return Dataset(tuple(records)), schemes


def extend_csv(original: str | Path, schemes: Sequence[ArchitectureScheme], out: str | Path,
               stage_rule=None) -> int:
    """Append the skip-connection and lost-receptive-field columns to a 6-feature table.

    Rows are matched to schemes by ``id == name``. Existing columns are kept
    verbatim; where derived structural values disagree with the table, the
    table wins and a warning is logged. Returns the number of rows written.
    """
    kwargs = {} if stage_rule is None else {"stage_rule": stage_rule}
    by_name = {s.name: s for s in schemes}
    with open(original, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        for c in ("id", *ORIGINAL_FEATURES):
            if c not in header:
                raise DataError(f"{original}: missing column {c!r}")
        rows = [{k.strip(): v for k, v in row.items()} for row in reader]
    rest = [h for h in header if h not in ("id", *SCHEME_FEATURES)]
    out_header = ["id", *SCHEME_FEATURES, *rest]
    mismatches = 0
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=out_header, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for line, row in enumerate(rows, start=2):
            rid = row["id"].strip()
            if rid not in by_name:
                raise DataError(f"line {line}: no scheme named {rid!r}")
            feats = scheme_feature_vector(by_name[rid], **kwargs).as_dict()
            for c in ORIGINAL_FEATURES:
                if _parse_number(row[c], line, c) != feats[c]:
                    mismatches += 1
                    log.warning("line %d: %s=%s in table, %s derived from scheme; keeping table value",
                                line, c, row[c], feats[c])
            row["num_skip_connections"] = feats["num_skip_connections"]
            row["num_lost_rf_layers"] = feats["num_lost_rf_layers"]
            w.writerow(row)
    if mismatches:
        log.warning("%d structural values differ between table and schemes", mismatches)
    return len(rows)


def write_original_csv(dataset: Dataset, path: str | Path) -> None:
    """The table without the two scheme features that ``extend_csv`` derives."""
    level = dataset.max_level
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *ORIGINAL_FEATURES, *epoch_columns(level), "gt_accuracy"])
        for r in dataset.records:
            cells = [r.id, *r.scheme.as_tuple()[:6]]
            for ep in r.epochs[:level]:
                cells.extend(repr(v) for v in ep.as_tuple())
            cells.append(repr(r.gt_accuracy))
            w.writerow(cells)
