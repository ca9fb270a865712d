from __future__ import annotations

import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchorient import Batch, OrientedGraph, TwoStageOrienter
from batchorient.verify import (
    OracleSizeError, PotentialTable, ReferenceOrientation, VerificationError, Verifier,
    arboricity_oracle, check_degree_potential_bounds, check_ht_bounded, check_threshold_stability,
    edge_classes, min_max_outdegree, min_max_outdegree_oracle, potential_of, potential_vector,
)
from batchorient.workload import gen_workload
from oracles import brute_arboricity, brute_min_max_outdegree

K4 = list(itertools.combinations(range(4), 2))
TRIANGLE = [(0, 1), (1, 2), (0, 2)]


def test_min_max_outdegree_examples():
    tree = [(0, 1), (0, 2), (2, 3), (2, 4)]
    assert min_max_outdegree_oracle(tree) == 1
    assert min_max_outdegree_oracle(TRIANGLE) == 1
    assert min_max_outdegree_oracle(K4) == 2
    assert min_max_outdegree_oracle([]) == 0
    with pytest.raises(OracleSizeError):
        min_max_outdegree_oracle([(0, i) for i in range(1, 30)], limit=10)


def test_arboricity_examples():
    assert arboricity_oracle([(0, 1), (1, 2), (3, 4)], 5) == 1
    assert arboricity_oracle(TRIANGLE, 3) == 2
    assert arboricity_oracle(K4, 4) == 2
    with pytest.raises(OracleSizeError):
        arboricity_oracle([], 16)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_flow_oracle_against_brute_force(seed):
    g = nx.gnm_random_graph(6, random.Random(seed).randint(0, 11), seed=seed)
    edges = [tuple(e) for e in g.edges()]
    k, tails = min_max_outdegree(edges)
    assert k == brute_min_max_outdegree(edges)
    if edges:
        assert all(t in e for t, e in zip(tails, edges))
        assert max(tails.count(v) for v in set(tails)) == k


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_arboricity_oracle_against_forest_cover(seed):
    g = nx.gnm_random_graph(6, random.Random(seed).randint(0, 8), seed=seed)
    edges = [tuple(e) for e in g.edges()]
    assert arboricity_oracle(edges, 6) == brute_arboricity(edges)


# -- potentials ----------------------------------------------------------------


def _front(G, recs):
    G.detach(recs)
    G.attach(recs, front=True)


def test_potential_examples():
    eps, delta = Fraction(1, 4), 2
    G = OrientedGraph(20, 1)
    ref = ReferenceOrientation({}, 3)
    assert potential_of(G, ref, 0, eps, delta) == 0
    recs = G.apply_batch(Batch.insert([(0, 1)]))
    _front(G, recs)
    ref = ReferenceOrientation({(0, 1): 0}, 3)
    assert potential_of(G, ref, 0, eps, delta) == 1 + 2 * eps
    # 3*delta + 1 bad back edges at vertex 2
    G = OrientedGraph(20, 1)
    G.apply_batch(Batch.insert([(2, v) for v in range(3, 3 + 3 * delta + 1)]))
    ref = ReferenceOrientation({(2, v): v for v in range(3, 3 + 3 * delta + 1)}, 3)
    assert potential_of(G, ref, 2, eps, delta) == 3 * delta * (1 + eps) + 1


def _naive_potential(G, ref, v, eps, delta):
    total = Fraction(0)
    bad_back = 0
    p = G.out[v]
    for r in p.front.items():
        total += 1 + 2 * eps if ref.tails[r.key] == r.tail else 1
    for r in p.back.items():
        if ref.tails[r.key] == r.tail:
            total += 1 - eps
        else:
            bad_back += 1
            total += 1 + eps if bad_back <= 3 * delta else 1
    return total


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(2, 7)]), st.integers(1, 3))
def test_potential_three_routes_agree(seed, eps, delta):
    rng = random.Random(seed)
    w = gen_workload("k-forest-union", 40, 2, 8, 10, seed)
    o = TwoStageOrienter(40, 2)
    for wb in w.batches:
        o.update(wb.to_batch())
    G = o.graph
    ref = ReferenceOrientation({k: rng.choice(k) for k in G.index}, 99)
    tab = PotentialTable(eps, delta)
    vec = potential_vector(G, ref, tab)
    for v in range(G.n):
        want = _naive_potential(G, ref, v, eps, delta)
        assert potential_of(G, ref, v, eps, delta) == want
        assert Fraction(vec[v], tab.q) == want
        assert sum(p for _, _, p in edge_classes(G, ref, eps, delta, v)) == want


def test_degree_potential_bounds_and_corruption():
    w = gen_workload("k-forest-union", 200, 2, 30, 20, 5)
    o = TwoStageOrienter(200, 2)
    for wb in w.batches:
        o.update(wb.to_batch())
    G, p = o.graph, o.params
    ref = ReferenceOrientation.static(list(G.index), 2, 1)
    assert check_degree_potential_bounds(G, ref, p.eps, p.delta).ok
    tab = PotentialTable(p.eps, p.delta)
    vec = potential_vector(G, ref, tab)
    v = max(range(G.n), key=G.dout.__getitem__)
    vec[v] += 6 * p.delta * tab.q  # pretend v's edges were all priced higher
    rep = check_degree_potential_bounds(G, ref, p.eps, p.delta, vec)
    assert not rep.ok and rep.detail["vertex"] == v
    empty = OrientedGraph(5, 1)
    assert check_degree_potential_bounds(empty, ReferenceOrientation({}, 0), p.eps, p.delta).ok


def test_ht_bounded_classification():
    eps, delta = Fraction(1, 2), 2
    rep = check_ht_bounded([0, 0], [0, 0], [3, 1], 1, None, 5, 3, eps, delta)
    assert rep.ok and rep.detail["class"] == "trivial"
    # scale 2: potentials below are numerators over 2
    r = [80, 10]
    q = [40, 10]
    T = 20
    ok = check_ht_bounded(r, q, [20, 5], 2, T, 5, 3, eps, delta)
    assert ok.ok and ok.detail["class"] == "bounded"
    bad1 = check_ht_bounded(r, [40, 2], [20, 5], 2, T, 5, 3, eps, delta)
    assert not bad1.ok and bad1.detail["condition"] == 1
    bad2 = check_ht_bounded(r, [78, 10], [20, 5], 2, T, 5, 3, eps, delta)
    assert not bad2.ok and bad2.detail["condition"] == 2
    bad3 = check_ht_bounded(r, q, [30, 5], 2, T, 5, 3, eps, delta)
    assert not bad3.ok and bad3.detail["condition"] == 3


def test_threshold_stability():
    assert check_threshold_stability([10, 11, 9, 10], 1).ok
    assert not check_threshold_stability([10, 12], 1).ok
    assert check_threshold_stability([], 3).ok


def test_verifier_flags_undersized_delta():
    o = TwoStageOrienter(100, 2)
    o.params.delta = 2  # the static reference gives vertex 0 of K4 out-degree 3
    ver = Verifier(o.params).attach(o.graph)
    with pytest.raises(VerificationError):
        ver.before_update(Batch.insert(K4))


def test_verifier_on_organic_corpus():
    w = gen_workload("adversarial-hub", 300, 2, 60, 15, 2)
    o = TwoStageOrienter(300, 2)
    ver = Verifier(o.params).attach(o.graph)
    for wb in w.batches:
        b = wb.to_batch()
        ver.before_update(b)
        ver.after_update(o.update(b))
    s = ver.summary()
    assert s["failures"] == 0 and s["passed"]["degree-potential"] == len(w.batches)
