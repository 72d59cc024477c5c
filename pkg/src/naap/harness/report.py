"""Report artifacts: Markdown/CSV/JSON tables, scatter data, importance tables, manifest."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..featsel import SearchTrace, feature_importance, feature_importance_by_name
from .plotting import importance_figure, save, scatter_figure
from .runs import Report, ReportRow

FORMATS = ("md", "csv", "json")
ACCELERATION = {0: "100.0%", 3: "96.7%", 6: "93.3%", 9: "90.0%"}
SVR_PLACEHOLDERS = {
    "baseline": ("SVR (RBF kernel)", "SVR (Polynomial kernel)", "SVR (Linear kernel)"),
    "ablation": ("SVR (RBF kernel)",),
    "extrapolation": ("SVR (Polynomial kernel)", "SVR (Linear kernel)"),
}
NA = "n/a (out of scope)"

CSV_FIELDS = ("algorithm", "level", "split", "featsel", "mae", "monotonicity", "violations", "n_test",
              "cost", "n_features", "mask", "selected")


def slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")


def _levels(rows: Sequence[ReportRow]) -> list[int]:
    return sorted({r.level for r in rows})


def _grouped(rows: Iterable[ReportRow]) -> dict[tuple[str, bool], dict[int, ReportRow]]:
    table: dict[tuple[str, bool], dict[int, ReportRow]] = {}
    for r in rows:
        table.setdefault((r.label, r.featsel), {})[r.level] = r
    return table


def render_markdown(report: Report, placeholders: bool = True) -> str:
    rows = report.rows
    levels = _levels(rows)
    head = ["Algorithm"] + [f"{ACCELERATION.get(l, '')} acceleration ({l} epochs)".strip() for l in levels]
    lines = [
        f"### {report.kind} (split: {report.split.kind}, "
        f"train {len(report.split.train_idx)} / test {len(report.split.test_idx)})",
        "",
        "MAE / Monotonicity Score / #Monotonicity Violations",
        "",
        "| " + " | ".join(head) + " |",
        "|" + "|".join(["---"] + [":---:"] * len(levels)) + "|",
    ]
    table = _grouped(rows)
    labels = list(dict.fromkeys(r.label for r in rows))
    kind = report.kind.split("-")[0]
    pending = list(SVR_PLACEHOLDERS.get(kind, ())) if placeholders else []

    def emit_placeholders():
        for name in pending:
            lines.append("| " + " | ".join([name] + [NA] * len(levels)) + " |")
        pending.clear()

    for label in labels:
        if label.startswith("Random Forest") and kind != "extrapolation":
            emit_placeholders()
        variants = [(label, False), (label, True)] if report.kind == "ablation" else [
            k for k in ((label, False), (label, True)) if k in table]
        for n, key in enumerate(variants):
            cells = table.get(key, {})
            name = label if n == 0 else ""
            lines.append("| " + " | ".join([name] + [cells[l].cell if l in cells else "" for l in levels]) + " |")
    emit_placeholders()
    if report.kind == "ablation":
        lines += ["", "Upper row: all features. Lower row: best feature subset found."]
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(v)
    if v is None:
        return ""
    return str(v)


def rows_to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        d = r.to_dict()
        w.writerow([_fmt(d[f]) for f in CSV_FIELDS])
    return buf.getvalue()


def report_to_json(report: Report) -> str:
    doc = {
        "kind": report.kind,
        "config": report.config.to_dict(),
        "split": {"kind": report.split.kind, "train": list(report.split.train_idx),
                  "test": list(report.split.test_idx)},
        "rows": [r.to_dict() for r in report.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def emit_scatter(pred, gt, path: str | Path, meta: dict | None = None, svg: bool = True) -> list[Path]:
    """CSV of (gt, prediction) pairs with ``# key: value`` header lines, plus an SVG scatter."""
    path = Path(path)
    pred = np.asarray(pred, dtype=float)
    gt = np.asarray(gt, dtype=float)
    if pred.shape != gt.shape:
        raise ValueError("predictions and targets differ in length")
    lines = [f"# {k}: {v}" for k, v in (meta or {}).items()]
    lines.append("gt_accuracy,predicted_accuracy")
    lines += [f"{g!r},{p!r}" for g, p in zip(gt.tolist(), pred.tolist())]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    out = [path]
    if svg:
        title = (meta or {}).get("title", "")
        out.append(save(scatter_figure(gt, pred, title), path.with_suffix(".svg")))
    return out


def read_scatter(path: str | Path) -> tuple[dict, np.ndarray, np.ndarray]:
    meta, gt, pred = {}, [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].partition(":")
            meta[k.strip()] = v.strip()
        elif line and not line.startswith("gt_accuracy"):
            g, p = line.split(",")
            gt.append(float(g))
            pred.append(float(p))
    return meta, np.array(gt), np.array(pred)


def _algorithm(trace: SearchTrace) -> str:
    return trace.label.split(" | ")[0] if trace.label else "unlabelled"


def _level(trace: SearchTrace) -> str:
    parts = trace.label.split(" | level ")
    return parts[1] if len(parts) > 1 else str(trace.n_features)


def importance_tables(traces: Sequence[SearchTrace], top_fraction: float = 0.08) -> list[dict]:
    """Selection rates per (algorithm, level) and per algorithm across levels."""
    if not traces:
        raise ValueError("no traces to summarise")
    by_cell: dict[tuple[str, str], list[SearchTrace]] = defaultdict(list)
    by_algo: dict[str, list[SearchTrace]] = defaultdict(list)
    for t in traces:
        by_cell[(_algorithm(t), _level(t))].append(t)
        by_algo[_algorithm(t)].append(t)
    out = []
    for (algo, level), ts in by_cell.items():
        rates = feature_importance(ts, top_fraction)
        names = ts[0].feature_names or tuple(f"f{i}" for i in range(ts[0].n_features))
        out += [{"pooling": "per_level", "algorithm": algo, "level": level, "feature": n, "rate": float(r)}
                for n, r in zip(names, rates)]
    for algo, ts in by_algo.items():
        if any(t.feature_names is None for t in ts):
            continue
        for name, rate in feature_importance_by_name(ts, top_fraction).items():
            out.append({"pooling": "across_levels", "algorithm": algo, "level": "all", "feature": name,
                        "rate": rate})
    return out


def emit_importance(traces: Sequence[SearchTrace], path: str | Path, top_fraction: float = 0.08,
                    figure: bool = True) -> list[Path]:
    rows = importance_tables(traces, top_fraction)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["pooling", "algorithm", "level", "feature", "rate"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "rate": repr(r["rate"])})
    path.write_text(buf.getvalue(), encoding="utf-8")
    out = [path]
    if figure:
        per_level: dict[str, dict[str, dict[str, float]]] = defaultdict(dict)
        for r in rows:
            if r["pooling"] == "per_level":
                per_level[r["level"]].setdefault(r["algorithm"], {})[r["feature"]] = r["rate"]
        for level, rates in per_level.items():
            fig = importance_figure(rates, f"selection rate in the best {top_fraction:.0%} subsets, level {level}")
            out.append(save(fig, path.with_name(f"{path.stem}_level{level}.png")))
    return out


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, config: dict, artifacts: Iterable[Path], seed: int) -> Path:
    out_dir = Path(out_dir)
    files = sorted({Path(p) for p in artifacts})
    doc = {
        "seed": seed,
        "config": config,
        "artifacts": {str(p.relative_to(out_dir)): sha256(p) for p in files},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_report(report: Report, out_dir: str | Path, formats: Sequence[str] = FORMATS,
                 figures: bool = True) -> list[Path]:
    """Write tables, split, per-cell scatter data, traces and figures for one report."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = slug(report.kind)
    written: list[Path] = []
    for fmt in formats:
        text = {"md": render_markdown, "csv": lambda r: rows_to_csv(r.rows), "json": report_to_json}[fmt](report)
        p = out_dir / f"{stem}.{fmt}"
        p.write_text(text, encoding="utf-8")
        written.append(p)
    p = out_dir / f"split_{report.split.kind}.json"
    p.write_text(report.split.to_json() + "\n", encoding="utf-8")
    written.append(p)

    best_per_level: dict[int, int] = {}
    for k, cell in enumerate(report.cells):
        r = cell.row
        name = f"{slug(r.label)}_L{r.level}{'_fs' if r.featsel else ''}"
        meta = {"title": f"{r.label}, {r.level} epochs ({report.split.kind})", "algorithm": r.label,
                "level": r.level, "split": r.split, "featsel": r.featsel, "cell": r.cell}
        written += emit_scatter(cell.predictions, cell.gt, out_dir / "scatter" / f"{name}.csv", meta, svg=False)
        cur = best_per_level.get(r.level)
        if cur is None or r.cost < report.cells[cur].row.cost:
            best_per_level[r.level] = k
        if cell.trace is not None:
            tp = out_dir / "traces" / f"{name}.json"
            tp.parent.mkdir(exist_ok=True)
            tp.write_text(cell.trace.to_json() + "\n", encoding="utf-8")
            written.append(tp)
    if figures:
        for level, k in sorted(best_per_level.items()):
            cell = report.cells[k]
            title = f"best at {level} epochs: {cell.row.label}\n{cell.row.cell}"
            written.append(save(scatter_figure(cell.gt, cell.predictions, title),
                                out_dir / f"{stem}_best_L{level}.png"))
    traces = [c.trace for c in report.cells if c.trace is not None]
    if traces:
        written += emit_importance(traces, out_dir / "importance.csv", figure=figures)
    return written


def check_rows(rows: Iterable[ReportRow]) -> None:
    """Every row's violation count must reproduce its monotonicity score."""
    for r in rows:
        expected = 1.0 - r.violations / math.comb(r.n_test, 2)
        if expected != r.monotonicity:
            raise ValueError(f"{r.label} level {r.level}: monotonicity {r.monotonicity} != {expected}")
