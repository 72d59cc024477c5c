import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from naap.featsel import (
    FeatureMask,
    SearchAborted,
    SearchConfig,
    SearchTrace,
    check_budget,
    exhaustive_search,
    feature_importance,
    feature_importance_by_name,
    hill_climb,
    iter_masks,
    neighbors,
)
from naap.metrics import EvalResult
from naap.regressors import spec_by_label

from planted import planted_problem


def result(cost):
    return EvalResult(mae=0.01, violations=0, n_test=10, monotonicity=1.0, cost=cost)


def table_evaluator(seed, n):
    rng = np.random.default_rng(seed)
    costs = rng.integers(0, 20, size=1 << n) / 100.0
    return lambda m: result(float(costs[m.bits]))


def test_mask_basics():
    m = FeatureMask.from_indices([0, 2], 4)
    assert str(m) == "1010"
    assert FeatureMask.from_string("1010") == m
    assert m.indices == (0, 2) and m.size == 2 and 2 in m and 1 not in m
    with pytest.raises(ValueError):
        FeatureMask(0, 3)
    with pytest.raises(ValueError):
        FeatureMask.from_indices([5], 3)


def test_neighbors():
    assert [str(m) for m in neighbors(FeatureMask.full(3))] == ["011", "101", "110"]
    assert [str(m) for m in neighbors(FeatureMask.from_string("100"))] == ["110", "101"]
    assert len(neighbors(FeatureMask.full(35))) == 35


def test_single_feature():
    calls = []
    trace = hill_climb(lambda m: calls.append(m) or result(0.5), 1)
    assert len(calls) == 1 and trace.best[0] == FeatureMask.full(1)


def test_best_never_worse_than_full():
    for seed in range(10):
        ev = table_evaluator(seed, 6)
        trace = hill_climb(ev, 6, SearchConfig(seed=seed))
        assert trace.best[1].cost <= ev(FeatureMask.full(6)).cost
        assert trace.history[0][0] == FeatureMask.full(6)
        assert trace.best[1].cost == min(r.cost for _, r in trace.history)


@pytest.mark.parametrize("p,branch", [(1, 3), (0.5, 1), (2, 2), (1, 1)])
def test_budget(p, branch):
    for seed in range(5):
        n = 9
        cfg = SearchConfig(p=p, branch=branch, seed=seed)
        trace = hill_climb(table_evaluator(seed, n), n, cfg)
        check_budget(trace)
        assert trace.n_steps <= math.floor(p * n)
        assert len(trace.history) <= 1 + math.floor(p * n) * branch * n
        assert all(len(s.evaluated) <= branch * n for s in trace.steps)


def test_budget_numbers():
    assert SearchConfig().evaluation_bound(35) == 3676
    assert SearchConfig(p=0.5).step_limit(35) == 17


def test_check_budget_detects_overrun():
    trace = hill_climb(table_evaluator(0, 4), 4, SearchConfig(p=1))
    trace.steps = trace.steps * 3
    with pytest.raises(RuntimeError):
        check_budget(trace)


def test_dedup():
    trace = hill_climb(table_evaluator(1, 8), 8, SearchConfig(seed=1, p=2))
    masks = [m for m, _ in trace.history]
    assert len(masks) == len(set(masks))
    raw = hill_climb(table_evaluator(1, 8), 8, SearchConfig(seed=1, p=2, dedup=False))
    check_budget(raw)
    assert len({m for m, _ in raw.history}) < len(raw.history)


def test_pruning_uses_cap_and_requeues():
    # flat costs put every neighbour in one group, so each step is capped at b*|F|
    trace = hill_climb(lambda m: result(0.1), 10, SearchConfig(branch=1, seed=3))
    assert all(len(s.evaluated) == 10 for s in trace.steps)
    assert sum(s.pruned for s in trace.steps) > 0


def test_step_dequeues_whole_priority_group():
    costs = {"111": 0.5, "011": 0.2, "101": 0.2, "110": 0.3}
    trace = hill_climb(lambda m: result(costs.get(str(m), 0.4)), 3, SearchConfig(branch=3))
    first = trace.steps[0]
    assert first.priority == 0.5 and first.dequeued == 3
    second = trace.steps[1]
    assert second.priority == 0.2
    assert set(second.evaluated) == {"001", "010", "100"}


def test_determinism_and_parallel_independence():
    ev, _ = planted_problem(4)
    cfg = SearchConfig(seed=11)
    a = hill_climb(ev, 8, cfg)
    b = hill_climb(ev, 8, cfg)
    with ThreadPoolExecutor(max_workers=8) as pool:
        c = hill_climb(ev, 8, cfg, map_fn=pool.map)
    assert a.to_json() == b.to_json() == c.to_json()


def test_seed_changes_pruning():
    ev = lambda m: result(0.1)
    a = hill_climb(ev, 10, SearchConfig(branch=1, seed=1))
    b = hill_climb(ev, 10, SearchConfig(branch=1, seed=2))
    assert a.steps[1].evaluated != b.steps[1].evaluated


def test_trace_json_roundtrip():
    trace = hill_climb(table_evaluator(2, 5), 5, SearchConfig(seed=2), feature_names="abcde", label="x | level 0")
    doc = json.loads(trace.to_json())
    assert doc["evaluations"][0]["mask"] == "11111"
    back = SearchTrace.from_dict(doc)
    assert back.to_json() == trace.to_json()


def test_evaluator_failure_keeps_partial_trace():
    def ev(m):
        if m.size < 3:
            raise ZeroDivisionError("boom")
        return result(m.size / 10)
    with pytest.raises(SearchAborted) as info:
        hill_climb(ev, 4, SearchConfig())
    assert len(info.value.trace.history) >= 1 + 4


def test_exhaustive_counts_and_ties():
    best, table = exhaustive_search(lambda m: result(0.3), 2)
    assert len(table) == 3
    best, _ = exhaustive_search(lambda m: result(0.3), 6)
    assert best == FeatureMask.from_indices([0], 6)
    best, _ = exhaustive_search(lambda m: 0.0 if m.size == 2 else 1.0, 4)
    assert best == FeatureMask.from_indices([0, 1], 4)
    with pytest.raises(ValueError):
        exhaustive_search(lambda m: 0.0, 17)


def test_exhaustive_matches_double_loop():
    for seed in range(5):
        ev = table_evaluator(seed, 6)
        best, _ = exhaustive_search(ev, 6)
        ref = None
        for bits in range(1, 64):
            m = FeatureMask(bits, 6)
            key = (ev(m).cost, m.size, m.indices)
            if ref is None or key < ref[0]:
                ref = (key, m)
        assert best == ref[1]


def test_hill_climb_finds_planted_optimum():
    hits = 0
    for seed in range(20):
        ev, _ = planted_problem(seed)
        trace = hill_climb(ev, 8, SearchConfig(seed=seed))
        best, table = exhaustive_search(ev, 8)
        assert trace.best[1].cost >= table[best].cost
        hits += trace.best[1].cost == table[best].cost
    assert hits >= 18


def test_importance_simple_cases():
    trace = SearchTrace(3, SearchConfig())
    trace.record(FeatureMask.from_string("101"), result(0.1))
    assert feature_importance([trace]).tolist() == [1.0, 0.0, 1.0]
    trace.record(FeatureMask.from_string("110"), result(0.2))
    assert feature_importance([trace], top_fraction=1.0).tolist() == [1.0, 0.5, 0.5]
    with pytest.raises(ValueError):
        feature_importance([SearchTrace(3, SearchConfig())])
    with pytest.raises(ValueError):
        feature_importance([trace], top_fraction=0)


def test_importance_planted():
    knn = spec_by_label("3-NN")
    for seed in range(5):
        ev, informative = planted_problem(seed, spec=knn, n_train=100, noise_sd=0.0)
        rates = feature_importance([hill_climb(ev, 8, SearchConfig(seed=seed))])
        assert rates[informative].min() > rates[~informative].max()


def test_importance_by_name_pools_levels():
    a = SearchTrace(2, SearchConfig(), feature_names=("x", "y"))
    a.record(FeatureMask.from_string("10"), result(0.1))
    b = SearchTrace(3, SearchConfig(), feature_names=("x", "y", "z"))
    b.record(FeatureMask.from_string("011"), result(0.2))
    rates = feature_importance_by_name([a, b], top_fraction=1.0)
    assert rates == {"x": 0.5, "y": 0.5, "z": 1.0}
    with pytest.raises(ValueError):
        feature_importance([a, b])


def test_iter_masks_count():
    assert sum(1 for _ in iter_masks(5)) == 31
