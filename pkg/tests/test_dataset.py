import csv
import json

import numpy as np
import pytest

from naap.dataset import (
    DataError,
    Split,
    SyntheticSpec,
    bin_by_accuracy,
    extend_csv,
    extrapolation_split,
    feature_matrix,
    generate_synthetic,
    load_csv,
    make_split,
    synthetic_naap,
    uniform_split,
    write_csv,
    write_original_csv,
)
from naap.scheme import write_schemes

ASCENDING = np.arange(1, 441) / 1000.0


def test_load_roundtrip(naap_data, naap_csv):
    loaded = load_csv(naap_csv)
    assert len(loaded) == 440
    assert len(loaded.feature_names(9)) == 35
    assert loaded == naap_data[0]


@pytest.mark.parametrize("level,width", [(0, 8), (3, 17), (6, 26), (9, 35)])
def test_feature_matrix_widths(naap_data, level, width):
    X, y = feature_matrix(naap_data[0], level)
    assert X.shape == (440, width)
    assert y.shape == (440,)


def test_feature_matrix_column_order(naap_data):
    dataset = naap_data[0]
    X, _ = feature_matrix(dataset, 3)
    r = dataset.records[0]
    assert X[0, :8].tolist() == list(r.scheme.as_tuple())
    assert X[0, 8:11].tolist() == list(r.epochs[0].as_tuple())
    assert dataset.feature_names(3)[8:11] == ["epoch1_train_loss", "epoch1_train_acc", "epoch1_test_acc"]


def test_too_few_epochs(tmp_path):
    dataset, _ = synthetic_naap(n=44, seed=1, n_epochs=2)
    with pytest.raises(DataError):
        feature_matrix(dataset, 3)


def _rewrite(src, dst, edit):
    rows = list(csv.reader(open(src, encoding="utf-8")))
    edit(rows)
    with open(dst, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)


def test_out_of_range_accuracy(naap_csv, tmp_path):
    def edit(rows):
        rows[3][rows[0].index("gt_accuracy")] = "1.2"
    _rewrite(naap_csv, tmp_path / "bad.csv", edit)
    with pytest.raises(DataError, match=r"line 4.*gt_accuracy"):
        load_csv(tmp_path / "bad.csv")


def test_non_numeric_cell(naap_csv, tmp_path):
    def edit(rows):
        rows[2][rows[0].index("num_macs")] = "lots"
    _rewrite(naap_csv, tmp_path / "bad.csv", edit)
    with pytest.raises(DataError, match=r"line 3.*num_macs"):
        load_csv(tmp_path / "bad.csv")


def test_missing_new_columns_points_to_extend(naap_data, tmp_path):
    write_original_csv(naap_data[0], tmp_path / "orig.csv")
    with pytest.raises(DataError, match="extend"):
        load_csv(tmp_path / "orig.csv")


def test_extend_restores_table(naap_data, naap_csv, tmp_path):
    dataset, schemes = naap_data
    write_original_csv(dataset, tmp_path / "orig.csv")
    write_schemes(schemes, tmp_path / "schemes.jsonl")
    assert extend_csv(tmp_path / "orig.csv", schemes, tmp_path / "ext.csv") == 440
    assert (tmp_path / "ext.csv").read_bytes() == naap_csv.read_bytes()


def test_extend_keeps_table_values_on_mismatch(naap_data, tmp_path, caplog):
    dataset, schemes = naap_data
    write_original_csv(dataset, tmp_path / "orig.csv")

    def edit(rows):
        rows[1][rows[0].index("num_params")] = "12345"
    _rewrite(tmp_path / "orig.csv", tmp_path / "orig2.csv", edit)
    extend_csv(tmp_path / "orig2.csv", schemes, tmp_path / "ext.csv")
    assert load_csv(tmp_path / "ext.csv").records[0].scheme.num_params == 12345
    assert "keeping table value" in caplog.text


def test_bins_small():
    gt = np.linspace(0.9, 0.1, 22)
    bins = bin_by_accuracy(gt, 2)
    assert [len(b) for b in bins] == [11, 11]
    assert sorted(gt[bins[0]]) == sorted(np.sort(gt)[:11])


def test_bins_divisibility():
    with pytest.raises(DataError):
        bin_by_accuracy(np.linspace(0, 1, 441), 40)


def test_bins_are_a_permutation(naap_data):
    bins = bin_by_accuracy(naap_data[0])
    assert sorted(i for b in bins for i in b) == list(range(440))


def test_bin_ties_by_row_index():
    gt = [0.5, 0.2, 0.5, 0.2, 0.5, 0.2]
    assert bin_by_accuracy(gt, 2) == [[1, 3, 5], [0, 2, 4]]


def test_uniform_positions():
    split = make_split(ASCENDING, "uniform")
    assert list(split.test_idx) == [5 + 11 * b for b in range(40)]
    assert len(split.train_idx) == 400


def test_even_bins_rejected():
    with pytest.raises(DataError):
        uniform_split([[0, 1], [2, 3]])


@pytest.mark.parametrize("kind", ["left", "right", "dual"])
def test_extrapolation_ordering(naap_data, kind):
    gt = naap_data[0].gt
    split = make_split(naap_data[0], kind)
    tr, te = gt[list(split.train_idx)], gt[list(split.test_idx)]
    assert (len(tr), len(te)) == (200, 20)
    assert not set(split.train_idx) & set(split.test_idx)
    if kind == "left":
        assert tr.min() > te.max()
    elif kind == "right":
        assert tr.max() < te.min()
    else:
        assert np.all((te < tr.min()) | (te > tr.max()))
        assert (te < tr.min()).sum() == 10


def test_dual_bins():
    split = make_split(ASCENDING, "dual")
    expected = [5 + 11 * b for b in [*range(10), *range(30, 40)]]
    assert list(split.test_idx) == expected


def test_strict_mode():
    with pytest.raises(DataError):
        make_split(np.linspace(0, 1, 220), "left")
    split = make_split(np.linspace(0, 1, 220), "left", strict=False)
    assert len(split.test_idx) == 10
    with pytest.raises(DataError):
        extrapolation_split(bin_by_accuracy(np.linspace(0, 1, 220), 20), "left")


def test_split_json():
    split = make_split(ASCENDING, "right")
    doc = json.loads(split.to_json())
    assert set(doc) == {"kind", "train", "test"}
    assert Split.from_json(split.to_json()) == split
    with pytest.raises(DataError):
        Split((1, 2), (2, 3), "uniform")


def test_synthetic_shapes_and_determinism():
    spec = SyntheticSpec(n_samples=50, n_informative=3, n_distractor=12, seed=11)
    a, b = generate_synthetic(spec), generate_synthetic(spec)
    assert a.X.shape == (50, 15)
    assert sum(a.informative) == 3
    assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
    assert np.all((a.y >= 0) & (a.y <= 1))


def test_synthetic_noiseless_linear():
    d = generate_synthetic(SyntheticSpec(n_samples=80, n_informative=2, n_distractor=3, seed=4))
    Z = d.X[:, np.array(d.informative)]
    A = np.column_stack([Z, np.ones(len(Z))])
    coef, *_ = np.linalg.lstsq(A, d.y, rcond=None)
    assert np.allclose(A @ coef, d.y, atol=1e-12)


def test_synthetic_callable_target():
    d = generate_synthetic(SyntheticSpec(n_samples=20, n_informative=1, n_distractor=0,
                                         target_fn=lambda Z: 0.5 + 0.0 * Z[:, 0], seed=0))
    assert np.all(d.y == 0.5)


def test_write_then_load_preserves_order(tmp_path):
    dataset, _ = synthetic_naap(n=44, seed=2)
    write_csv(dataset, tmp_path / "d.csv")
    assert load_csv(tmp_path / "d.csv").ids == dataset.ids
