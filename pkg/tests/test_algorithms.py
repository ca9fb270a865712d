from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchorient import (
    AmortizedOrienter, AmortizedParams, Batch, ReinsertionOrienter, ReinsertionParams,
    TwoStageOrienter, WorstCaseParams,
)
from batchorient.algo_reinsertion import RecursionGuardError
from batchorient.workload import gen_workload
from scenarios import hub_batches, run_verified, warm_hubs


def _drive(o, w):
    reps = []
    for wb in w.batches:
        reps.append(o.update(wb.to_batch()))
        assert set(o.graph.index) == _expected_edges(w, len(reps))
    return reps


_EXPECT_CACHE: dict = {}


def _expected_edges(w, upto):
    key = (id(w), upto)
    if key not in _EXPECT_CACHE:
        prev = _EXPECT_CACHE.get((id(w), upto - 1), set())
        wb = w.batches[upto - 1]
        cur = set(prev)
        for a, b in wb.edges:
            e = (min(a, b), max(a, b))
            if wb.kind == "insert":
                cur.add(e)
            else:
                cur.discard(e)
        _EXPECT_CACHE[key] = cur
    return _EXPECT_CACHE[key]


# -- amortized -----------------------------------------------------------------


def test_amortized_defaults():
    p = AmortizedParams.default(5)
    assert (p.tau_star, p.tau_prime, p.tau, p.bound) == (6, 11, 24, 35)
    assert p.eps == Fraction(1, 5)
    for c in range(1, 9):
        assert AmortizedParams.default(c).bound == 7 * c


def test_amortized_param_validation():
    with pytest.raises(ValueError):
        AmortizedParams(2, 3, 5, 10)  # tau too small
    with pytest.raises(ValueError):
        AmortizedParams(2, 2, 5, 20)  # tau_star not above c


def test_amortized_single_edge():
    o = AmortizedOrienter(10, 1)
    rep = o.update(Batch.insert([(3, 4)]))
    assert rep.flips == 0 and rep.max_outdegree == 1 and rep.edges_to_static == 0


def test_amortized_forest_stream():
    w = gen_workload("forest-stars", 3000, 1, 500, 40, 3)
    o = AmortizedOrienter(w.n, 1)
    inserted = 0
    for wb in w.batches:
        rep = o.update(wb.to_batch())
        inserted += len(wb.edges) if wb.kind == "insert" else 0
        assert rep.max_outdegree <= 7
        if wb.kind == "delete":
            assert rep.flips == 0
    assert inserted >= 10_000
    o.graph.check()


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["k-forest-union", "sliding-window", "adversarial-hub"]), st.integers(1, 4), st.integers(0, 99))
def test_amortized_bound_and_partition(kind, c, seed):
    w = gen_workload(kind, 300, c, 40, 25, seed)
    o = AmortizedOrienter(w.n, c)
    for wb in w.batches:
        rep = o.update(wb.to_batch())
        assert rep.max_outdegree <= 7 * c
        for v in range(w.n):
            assert o.partition.is_high(v) == (o.graph.dout[v] > o.params.tau)


# -- two-stage -----------------------------------------------------------------


def test_twostage_params():
    p = WorstCaseParams.twostage(1 << 16, 2)
    assert p.log_n == 16 and p.sigma == 4 and p.delta == 8 and p.eps == Fraction(1, 4)
    assert p.c1 == 2 and p.H == 10 and p.eta == math.ceil(1 + 4 + 8)
    with pytest.raises(ValueError):
        WorstCaseParams.twostage(100, 2, eps=Fraction(3, 2))


def test_twostage_empty_batch_and_flip_budget():
    o = TwoStageOrienter(200, 2)
    rep = o.update(Batch.insert([]))
    assert rep.calls == [] and rep.flips == 0
    w = gen_workload("adversarial-hub", 200, 2, 60, 12, 1)
    for wb in w.batches:
        rep = o.update(wb.to_batch())
        assert rep.flips <= 2 * math.ceil(len(wb.edges) * o.params.eta)
    o.graph.check()


def test_twostage_edge_set_is_preserved():
    w = gen_workload("k-forest-union", 300, 3, 50, 20, 4)
    _drive(TwoStageOrienter(w.n, 3), w)


def test_twostage_warm_start_is_bounded():
    o = TwoStageOrienter(1000, 2)
    start = warm_hubs(o, 2, 600)
    ver, reps = run_verified(o, hub_batches(1000, 2, start, 40, 4, 2, delete_every=5))
    assert ver.classes["bounded"] >= 5 and not ver.failures
    for rep in reps:
        for call in rep.calls:
            if call.branch == "bounded":
                T1, T2 = call.thresholds
                assert T2 <= T1 + o.params.c1


# -- reinsertion ---------------------------------------------------------------


def test_reinsertion_params():
    p = ReinsertionParams.default(1 << 10, 3)
    assert p.log_n == 10 and p.delta == 9 and p.sigma == 10 and p.eps == Fraction(1, 10)
    assert p.c1 == 1 and p.H == 2 and p.alpha == 9 and p.lam == Fraction(1, 10)
    assert p.kept_per_vertex == 1 <= math.ceil(4 * 3 / 10)
    assert p.depth_guard(6) == 4 * 3 * 10
    with pytest.raises(ValueError):
        ReinsertionParams.default(100, 2, lam=Fraction(1))


def test_reinsertion_empty_batch():
    o = ReinsertionOrienter(100, 1)
    rep = o.update(Batch.insert([]))
    assert rep.calls == [] and rep.recursion_depth == 0


def test_reinsertion_edge_conservation_and_shrink():
    o = ReinsertionOrienter(1000, 3)
    start = warm_hubs(o, 3, 300)
    before = set(o.graph.index)
    lam = o.params.lam
    for b in hub_batches(1000, 3, start, 40, 4, 3, delete_every=4):
        rep = o.update(b)
        keys = {(min(a, c), max(a, c)) for a, c in b.edges}
        before = before | keys if b.kind == "insert" else before - keys
        assert set(o.graph.index) == before
        for cur, nxt in zip(rep.calls, rep.calls[1:]):
            assert nxt.batch_size == cur.removed <= (1 - lam) * cur.batch_size
        assert rep.recursion_depth <= o.params.depth_guard(len(b))
    o.graph.check()


def test_reinsertion_guard_fires():
    o = ReinsertionOrienter(1000, 3, ReinsertionParams.default(1000, 3))
    o.params.depth_guard = lambda b: 1  # type: ignore[method-assign]
    start = warm_hubs(o, 3, 300)
    with pytest.raises(RecursionGuardError):
        for b in hub_batches(1000, 3, start, 40, 4, 3):
            o.update(b)


def test_reinsertion_warm_start_is_bounded():
    o = ReinsertionOrienter(1000, 3)
    start = warm_hubs(o, 3, 300)
    ver, reps = run_verified(o, hub_batches(1000, 3, start, 40, 4, 1))
    assert ver.classes["bounded"] >= 1 and not ver.failures
    assert max(r.recursion_depth for r in reps) >= 1
