import json
import math
import warnings

import numpy as np
import pytest

from naap.featsel import SearchConfig
from naap.harness import report as rp
from naap.harness.cli import main
from naap.harness.published_tables import ABLATION, BASELINE, DUAL, LEFT, RIGHT, TEST_SIZES
from naap.harness.runs import (
    ConfigError,
    ExtrapolationWarning,
    RunConfig,
    derive_seed,
    run_ablation,
    run_baseline,
    run_extrapolation,
    specs_from_labels,
)
from naap.metrics import monotonicity_score, round_half_up

SMALL = specs_from_labels(["3-NN", "Linear Regression (D=0.25)", "Decision Tree"])


def small_config(**kw):
    base = dict(split_kind="uniform", levels=(0, 3), specs=SMALL, seed=5)
    base.update(kw)
    return RunConfig(**base)


def test_derive_seed_is_stable():
    assert derive_seed(7, "3-NN", 3, "uniform") == derive_seed(7, "3-NN", 3, "uniform")
    assert derive_seed(7, "3-NN", 3, "uniform") != derive_seed(8, "3-NN", 3, "uniform")
    assert 0 <= derive_seed(0) < 2 ** 64


def test_baseline_rows(naap_data):
    report = run_baseline(naap_data[0], small_config())
    assert [(r.label, r.level) for r in report.rows] == [(s.label, l) for s in SMALL for l in (0, 3)]
    rp.check_rows(report.rows)
    assert all(r.n_test == 40 and not r.featsel for r in report.rows)


def test_ablation_pairs(naap_data):
    report = run_ablation(naap_data[0], small_config(levels=(0,)))
    on = [r for r in report.rows if r.featsel]
    off = [r for r in report.rows if not r.featsel]
    assert len(on) == len(off) == 3
    for a, b in zip(off, on):
        assert b.cost <= a.cost
        assert b.mask is not None and len(b.selected) == b.mask.count("1")
    text = rp.render_markdown(report)
    assert text.count("| Decision Tree |") == 1 and "n/a (out of scope)" in text


def test_extrapolation_guards(naap_data):
    with pytest.raises(ConfigError):
        run_extrapolation(naap_data[0], small_config(split_kind="left"))
    with pytest.warns(ExtrapolationWarning):
        report = run_extrapolation(naap_data[0], small_config(split_kind="left", force_trees=True, levels=(0,)))
    assert all(r.n_test == 20 for r in report.rows)
    with pytest.raises(ConfigError):
        run_baseline(naap_data[0], small_config(split_kind="dual"))


def test_extrapolation_default_is_linear_family(naap_data):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        report = run_extrapolation(naap_data[0], RunConfig(split_kind="dual", levels=(9,)))
    assert [r.label for r in report.rows][0] == "Linear Regression"
    assert len(report.rows) == 7


def test_standardize_flag_changes_knn(naap_data):
    a = run_baseline(naap_data[0], small_config(levels=(3,), specs=SMALL[:1]))
    b = run_baseline(naap_data[0], small_config(levels=(3,), specs=SMALL[:1], standardize=False))
    assert a.rows[0].mae != b.rows[0].mae


def test_parallel_cells_match_serial(naap_data):
    cfg = small_config(featsel=True, levels=(0,), search=SearchConfig(p=0.5))
    serial = run_baseline(naap_data[0], cfg)
    parallel = run_baseline(naap_data[0], small_config(featsel=True, levels=(0,), search=SearchConfig(p=0.5), jobs=3))
    assert rp.report_to_json(serial) == rp.report_to_json(parallel)


def test_markdown_layout(naap_data):
    report = run_baseline(naap_data[0], small_config())
    lines = rp.render_markdown(report).splitlines()
    assert "| Algorithm | 100.0% acceleration (0 epochs) | 96.7% acceleration (3 epochs) |" in lines
    assert any(l.startswith("| SVR (RBF kernel) |") for l in lines)


def test_csv_and_json_agree(naap_data):
    report = run_baseline(naap_data[0], small_config())
    rows = rp.rows_to_csv(report.rows).splitlines()
    doc = json.loads(rp.report_to_json(report))
    assert len(rows) == 1 + len(doc["rows"])
    assert rows[0].split(",")[:3] == ["algorithm", "level", "split"]
    assert doc["split"]["test"] == list(report.split.test_idx)


def test_scatter_roundtrip(tmp_path):
    gt = np.array([0.81, 0.84, 0.9])
    pred = np.array([0.8, 0.86, 0.88])
    paths = rp.emit_scatter(pred, gt, tmp_path / "s.csv", {"algorithm": "3-NN", "level": 3})
    assert [p.suffix for p in paths] == [".csv", ".svg"]
    meta, g, p = rp.read_scatter(paths[0])
    assert meta == {"algorithm": "3-NN", "level": "3"}
    assert np.array_equal(g, gt) and np.array_equal(p, pred)
    again = rp.emit_scatter(pred, gt, tmp_path / "t.csv", {"algorithm": "3-NN", "level": 3})
    assert paths[1].read_bytes() == again[1].read_bytes()


def test_write_report_artifacts(naap_data, tmp_path):
    report = run_ablation(naap_data[0], small_config(levels=(0,)))
    written = rp.write_report(report, tmp_path)
    names = {p.relative_to(tmp_path).as_posix() for p in written}
    assert {"ablation.md", "ablation.csv", "ablation.json", "split_uniform.json", "importance.csv",
            "ablation_best_L0.png", "traces/3_nn_L0_fs.json"} <= names
    imp = (tmp_path / "importance.csv").read_text().splitlines()
    assert imp[0] == "pooling,algorithm,level,feature,rate"
    assert any(l.startswith("across_levels,") for l in imp)


def test_check_rows_catches_inconsistency(naap_data):
    report = run_baseline(naap_data[0], small_config(levels=(0,)))
    from dataclasses import replace
    bad = replace(report.rows[0], violations=report.rows[0].violations + 1)
    with pytest.raises(ValueError):
        rp.check_rows([bad])


def _table_cells():
    for name, table in (("BASELINE", BASELINE), ("LEFT", LEFT), ("RIGHT", RIGHT), ("DUAL", DUAL)):
        for label, cells in table.items():
            for cell in cells:
                if cell is not None:
                    yield name, label, cell
    for label, rows in ABLATION.items():
        for cells in rows:
            for cell in cells:
                yield "ABLATION", label, cell


def test_published_cells_are_self_consistent():
    n = 0
    for name, label, (mae, mono, viol) in _table_cells():
        size = TEST_SIZES[name]
        assert round_half_up(monotonicity_score(viol, size), 3) == mono, (name, label, viol)
        n += 1
    assert n == 276


# --- command line ---


def run_cli(*argv):
    # argparse exits through SystemExit; report its code like main() does
    try:
        return main([str(a) for a in argv])
    except SystemExit as exc:
        return exc.code


def test_cli_baseline(naap_csv, tmp_path, capsys):
    code = run_cli("baseline", "--dataset", naap_csv, "--out", tmp_path, "--levels", "0,9",
                   "--algos", "3-NN,Gradient Boosting (N=25)", "--seed", 7)
    assert code == 0
    out = capsys.readouterr().out
    assert "| 3-NN |" in out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed"] == 7 and "baseline.csv" in manifest["artifacts"]
    assert (tmp_path / "baseline_best_L9.png").exists()


def test_cli_featsel_then_importance(naap_csv, tmp_path):
    assert run_cli("featsel", "--dataset", naap_csv, "--out", tmp_path / "fs", "--algo", "3-NN",
                   "--level", 3, "--no-figures") == 0
    summary = json.loads(next((tmp_path / "fs").glob("featsel_*.json")).read_text())
    assert summary["best"]["cost"] <= summary["all_features"]["cost"]
    assert summary["evaluations"] <= 1 + 17 * 3 * 17
    assert run_cli("importance", tmp_path / "fs" / "traces", "--out", tmp_path / "imp", "--no-figures") == 0
    assert (tmp_path / "imp" / "importance.csv").exists()


def test_cli_extend_and_synth(naap_data, tmp_path):
    assert run_cli("synth", "--out", tmp_path, "--seed", 3) == 0
    assert run_cli("extend", "--schemes", tmp_path / "schemes.jsonl", "--dataset",
                   tmp_path / "naap440_original.csv", "--output", tmp_path / "ext.csv") == 0
    assert (tmp_path / "ext.csv").read_bytes() == (tmp_path / "naap440e.csv").read_bytes()


@pytest.mark.parametrize("argv,code", [
    (["baseline"], 1),
    (["baseline", "--dataset", "missing.csv"], 2),
    (["bogus"], 1),
    (["extrapolate", "--dataset", "{csv}", "--kind", "left", "--algos", "Decision Tree"], 1),
    (["baseline", "--dataset", "{csv}", "--algos", "SVR (RBF kernel)"], 1),
    (["baseline", "--dataset", "{csv}", "--levels", "x"], 1),
    (["baseline", "--dataset", "{csv}", "--levels", "12", "--algos", "3-NN"], 2),
    (["importance", "{tmp}"], 2),
])
def test_cli_exit_codes(argv, code, naap_csv, tmp_path):
    argv = [a.format(csv=naap_csv, tmp=tmp_path) for a in argv]
    assert run_cli(*argv, "--out", tmp_path / "o") == code


def test_cli_original_table_points_to_extend(naap_data, tmp_path, capsys):
    from naap.dataset import write_original_csv
    write_original_csv(naap_data[0], tmp_path / "orig.csv")
    assert run_cli("baseline", "--dataset", tmp_path / "orig.csv", "--out", tmp_path) == 2
    assert "extend" in capsys.readouterr().err


def test_cli_permissive_small_dataset(tmp_path):
    assert run_cli("synth", "--out", tmp_path, "--n", 88) == 0
    assert run_cli("baseline", "--dataset", tmp_path / "naap440e.csv", "--out", tmp_path / "o",
                   "--algos", "3-NN", "--levels", "0") == 2
    assert run_cli("baseline", "--dataset", tmp_path / "naap440e.csv", "--out", tmp_path / "o",
                   "--algos", "3-NN", "--levels", "0", "--permissive", "--no-figures") == 0
