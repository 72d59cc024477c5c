"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .. import dataset as ds
from ..featsel import SearchAborted, SearchConfig, SearchTrace, hill_climb
from ..metrics import CostFunction, evaluate
from ..regressors import ActivationDomainError, RegressorError, fit, predict, spec_by_label
from ..scheme import SchemeError, read_schemes, write_schemes
from . import report as rp
from .runs import (
    ConfigError,
    RunConfig,
    derive_seed,
    run_ablation,
    run_baseline,
    run_extrapolation,
    specs_from_labels,
    subset_evaluator,
)

log = logging.getLogger("naap")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _levels(text: str) -> tuple[int, ...]:
    try:
        levels = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not levels or any(l < 0 for l in levels):
        raise argparse.ArgumentTypeError("levels must be nonnegative integers")
    return levels


def _common(p: argparse.ArgumentParser, dataset_required: bool = True) -> None:
    p.add_argument("--dataset", required=dataset_required, help="NAAP-440e CSV")
    p.add_argument("--seed", type=int, default=0, help="global seed (u64)")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--cost", choices=[c.value for c in CostFunction], default=CostFunction.SQRT_ROUNDED.value)
    p.add_argument("--p", type=float, default=1.0, help="descent steps per feature")
    p.add_argument("--branch", type=int, default=3, help="max branching factor")
    p.add_argument("--no-dedup", action="store_true", help="re-evaluate subsets reached twice")
    p.add_argument("--no-standardize", action="store_true", help="feed raw features to kNN and linear models")
    p.add_argument("--format", choices=["md", "csv", "json", "all"], default="all")
    p.add_argument("--levels", type=_levels, default=ds.LEVELS, help="comma-separated epoch levels")
    p.add_argument("--algos", help="comma-separated row labels, e.g. '3-NN,Decision Tree'")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent cells")
    p.add_argument("--permissive", action="store_true", help="allow datasets other than 440 rows")
    p.add_argument("--no-figures", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="naap", description="NAAP-440e accuracy-prediction benchmark harness")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extend", help="add the two derived scheme columns to a 6-feature CSV")
    p.add_argument("--schemes", required=True, help="JSON-lines schemes file")
    p.add_argument("--dataset", required=True, help="original 6-feature CSV")
    p.add_argument("--out", default="out")
    p.add_argument("--output", help="output CSV path (default <out>/naap440e.csv)")

    p = sub.add_parser("baseline", help="full regressor grid on the uniform split")
    _common(p)
    p.add_argument("--featsel", action="store_true", help="select features per cell")

    p = sub.add_parser("ablation", help="each cell with all features and with selected features")
    _common(p)

    p = sub.add_parser("extrapolate", help="linear-family grid on an extrapolation split")
    _common(p)
    p.add_argument("--kind", choices=["left", "right", "dual"], required=True)
    p.add_argument("--featsel", action="store_true")
    p.add_argument("--force-trees", action="store_true", help="allow tree-based regressors")

    p = sub.add_parser("featsel", help="one feature-selection search")
    _common(p)
    p.add_argument("--algo", required=True, help="row label, e.g. 'Gradient Boosting (N=200)'")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--split", choices=list(ds.SPLIT_KINDS), default="uniform")

    p = sub.add_parser("importance", help="selection rates from saved traces")
    p.add_argument("traces", nargs="+", help="trace JSON files or directories of them")
    p.add_argument("--top", type=float, default=0.08, help="fraction of best subsets kept")
    p.add_argument("--out", default="out")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("synth", help="write a synthetic NAAP-440e-shaped dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=ds.STRICT_N_RECORDS)
    p.add_argument("--out", default="out")
    return parser


def _run_config(args, split_kind: str, featsel: bool) -> RunConfig:
    specs = None
    if args.algos:
        specs = specs_from_labels([a.strip() for a in args.algos.split(",") if a.strip()], args.seed)
    return RunConfig(
        split_kind=split_kind,
        levels=args.levels,
        specs=specs,
        featsel=featsel,
        search=SearchConfig(p=args.p, branch=args.branch, cost_variant=args.cost, dedup=not args.no_dedup),
        cost_variant=args.cost,
        seed=args.seed,
        standardize=not args.no_standardize,
        strict=not args.permissive,
        jobs=args.jobs,
        force_trees=getattr(args, "force_trees", False),
    )


def _formats(args) -> tuple[str, ...]:
    return rp.FORMATS if args.format == "all" else (args.format,)


def _finish(out: Path, written, config: dict, seed: int) -> None:
    manifest = rp.write_manifest(out, config, written, seed)
    for p in [*written, manifest]:
        if p.suffix in (".md", ".csv", ".json") and p.parent == out:
            print(p)


def cmd_report(args) -> None:
    dataset = ds.load_csv(args.dataset)
    if args.command == "baseline":
        report = run_baseline(dataset, _run_config(args, "uniform", args.featsel))
    elif args.command == "ablation":
        report = run_ablation(dataset, _run_config(args, "uniform", True))
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            report = run_extrapolation(dataset, _run_config(args, args.kind, args.featsel))
    rp.check_rows(report.rows)
    out = Path(args.out)
    written = rp.write_report(report, out, _formats(args), figures=not args.no_figures)
    if "md" in _formats(args):
        sys.stdout.write(rp.render_markdown(report))
    _finish(out, written, {"command": args.command, **report.config.to_dict()}, args.seed)


def cmd_featsel(args) -> None:
    dataset = ds.load_csv(args.dataset)
    config = _run_config(args, args.split, True)
    split = ds.make_split(dataset, args.split, strict=config.strict)
    spec = spec_by_label(args.algo)
    spec = spec.with_seed(derive_seed(args.seed, spec.label, args.level, args.split))
    if args.no_standardize and spec.family in ("knn", "linear"):
        spec = spec.with_params(standardize=False)
    X, y = ds.feature_matrix(dataset, args.level)
    tr, te = list(split.train_idx), list(split.test_idx)
    evaluator = subset_evaluator(spec, X[tr], y[tr], X[te], y[te], args.cost)
    search = SearchConfig(p=args.p, branch=args.branch, cost_variant=args.cost, dedup=not args.no_dedup,
                          seed=derive_seed(args.seed, "featsel", spec.label, args.level, args.split))
    names = ds.feature_names(args.level)
    trace = hill_climb(evaluator, X.shape[1], search, feature_names=names,
                       label=f"{spec.label} | level {args.level}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{rp.slug(spec.label)}_L{args.level}_{args.split}"
    written = []
    tp = out / "traces" / f"{stem}.json"
    tp.parent.mkdir(exist_ok=True)
    tp.write_text(trace.to_json() + "\n", encoding="utf-8")
    written.append(tp)
    mask, res = trace.best
    cols = list(mask.indices)
    pred = predict(fit(spec, X[tr][:, cols], y[tr]), X[te][:, cols])
    full = trace.history[0][1]
    summary = {
        "algorithm": spec.label, "level": args.level, "split": args.split,
        "evaluations": len(trace.history), "steps": trace.n_steps,
        "best_mask": str(mask), "selected": [names[i] for i in cols],
        "best": res.to_dict(), "all_features": full.to_dict(),
        "best_cell": res.cell, "all_features_cell": full.cell,
    }
    sp = out / f"featsel_{stem}.json"
    sp.write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    written.append(sp)
    meta = {"title": f"{spec.label}, {args.level} epochs, selected features", "cell": res.cell}
    written += rp.emit_scatter(pred, y[te], out / "scatter" / f"{stem}_fs.csv", meta, svg=not args.no_figures)
    written += rp.emit_importance([trace], out / f"importance_{stem}.csv", figure=not args.no_figures)
    print(f"{spec.label} @ {args.level} epochs: all features {full.cell} -> selected {res.cell} "
          f"({len(trace.history)} evaluations, {trace.n_steps} steps)")
    _finish(out, written, {"command": "featsel", **_plain_args(args)}, args.seed)


def _plain_args(args) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(args).items() if k != "func"}


def _trace_files(paths) -> list[Path]:
    files = []
    for p in map(Path, paths):
        files += sorted(p.rglob("*.json")) if p.is_dir() else [p]
    return files


def cmd_importance(args) -> None:
    traces = []
    for f in _trace_files(args.traces):
        try:
            doc = json.loads(f.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ds.DataError(f"{f}: {exc}") from exc
        if "evaluations" in doc and "config" in doc:
            traces.append(SearchTrace.from_dict(doc))
    if not traces:
        raise ds.DataError("no search traces found")
    out = Path(args.out)
    written = rp.emit_importance(traces, out / "importance.csv", args.top, figure=not args.no_figures)
    _finish(out, written, {"command": "importance", "top": args.top, "traces": len(traces)}, 0)


def cmd_extend(args) -> None:
    schemes = read_schemes(args.schemes)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    target = Path(args.output) if args.output else out / "naap440e.csv"
    n = ds.extend_csv(args.dataset, schemes, target)
    print(f"wrote {n} rows to {target}")


def cmd_synth(args) -> None:
    dataset, schemes = ds.synthetic_naap(args.n, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ds.write_csv(dataset, out / "naap440e.csv")
    ds.write_original_csv(dataset, out / "naap440_original.csv")
    write_schemes(schemes, out / "schemes.jsonl")
    for name in ("naap440e.csv", "naap440_original.csv", "schemes.jsonl"):
        print(out / name)


COMMANDS = {
    "baseline": cmd_report, "ablation": cmd_report, "extrapolate": cmd_report, "featsel": cmd_featsel,
    "importance": cmd_importance, "extend": cmd_extend, "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (RegressorError, ConfigError) as exc:
        print(f"naap: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ds.DataError, SchemeError, ActivationDomainError, FileNotFoundError, ValueError) as exc:
        print(f"naap: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SearchAborted as exc:
        print(f"naap: search aborted after {len(exc.trace.history)} evaluations: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"naap: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
