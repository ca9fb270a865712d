from __future__ import annotations

import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchorient import prims
from batchorient.skewbag import (
    Bag, BagError, Pannier, is_skew_weight, is_valid_skew, skew_add, skew_init, skew_subtract,
)
from oracles import NaiveMultiset, all_skew_reps, skew_predicate, skew_table

TOUCH_K = 3  # calibrated: peek/pop charge k + digit steps, steps <= 2 log2(size) + 2


def touch_cap(k: int, size: int) -> int:
    return TOUCH_K * (k + math.ceil(math.log2(size + 2)))


TABLE = skew_table(1 << 16)


def test_skew_weight():
    assert [w for w in range(1, 40) if is_skew_weight(w)] == [1, 3, 7, 15, 31]
    assert not is_skew_weight(0)


def test_init_examples():
    assert skew_init(0) == []
    assert skew_init(10) == [3, 7]
    assert skew_init(2) == [1, 1]
    assert all_skew_reps(10) == [[3, 7]]
    assert all_skew_reps(2) == [[1, 1]]


def test_add_subtract_examples():
    assert skew_add([1, 1], 1) == [3]
    assert skew_add([3, 7], 0) == [3, 7]
    assert skew_add([], 10) == [3, 7]
    assert skew_subtract([3, 7], 10) == []
    assert skew_subtract([3], 1) == [1, 1]
    assert skew_subtract([1, 1, 3], 0) == [1, 1, 3]


def test_subtract_underflow_is_an_error():
    with pytest.raises(BagError):
        skew_subtract([1, 3], 5)
    with pytest.raises(ValueError):
        skew_init(-1)


def test_predicate_agrees_with_restatement():
    rng = random.Random(1)
    for _ in range(3000):
        ws = sorted(rng.choice([1, 2, 3, 5, 7, 15, 31]) for _ in range(rng.randint(0, 5)))
        assert is_valid_skew(ws) == skew_predicate(ws), ws


def test_representations_are_unique_for_small_values():
    for x in range(0, 200):
        reps = all_skew_reps(x)
        assert reps == [TABLE[x]], x


def test_init_exhaustive():
    for x in range(len(TABLE)):
        assert skew_init(x) == TABLE[x], x


def test_add_subtract_exhaustive_values():
    """Every value up to 2^16 as the base, each with a spread of operands."""
    top = 1 << 16
    rng = random.Random(7)
    for a in range(top + 1):
        base = TABLE[a]
        for x in (0, 1, 2, 3, rng.randrange(top - a + 1)):
            if a + x > top:
                continue
            got = skew_add(base, x)
            assert sum(got) == a + x and skew_predicate(got), (a, x)
        for x in {0, min(1, a), a, rng.randrange(a + 1)}:
            got = skew_subtract(base, x)
            assert sum(got) == a - x and skew_predicate(got), (a, x)


def test_add_subtract_all_small_pairs():
    for a in range(257):
        for x in range(257):
            got = skew_add(TABLE[a], x)
            assert sum(got) == a + x and skew_predicate(got)
        for x in range(a + 1):
            got = skew_subtract(TABLE[a], x)
            assert sum(got) == a - x and skew_predicate(got)


@given(st.lists(st.tuples(st.booleans(), st.integers(0, 300)), max_size=40))
def test_arithmetic_chains_stay_valid(ops):
    ws: list[int] = []
    for add, x in ops:
        if add:
            ws = skew_add(ws, x)
        else:
            ws = skew_subtract(ws, min(x, sum(ws)))
        assert skew_predicate(ws)


# -- bag ---------------------------------------------------------------------


def test_bag_basic_examples():
    b = Bag()
    hs = b.batch_insert(list(range(5)))
    assert len(b) == 5 and all(h.alive for h in hs)
    b.batch_insert([])
    assert len(b) == 5
    b7 = Bag(range(7))
    assert Counter(b7.peek(7)) == Counter(range(7))
    assert b7.peek(3) == b7.peek(3)
    assert b7.pop(0) == [] and len(b7) == 7


def test_peek_equals_pop_and_is_pure():
    b = Bag(range(50))
    before = b.items()
    p = b.peek(17)
    assert b.peek(17) == p and b.items() == before
    assert b.pop(17) == p
    assert Counter(b.items()) == Counter(before) - Counter(p)
    b.check()


def test_pop_all_and_errors():
    b = Bag("abcdef")
    assert sorted(b.pop(6)) == list("abcdef") and len(b) == 0
    b = Bag([1, 2])
    with pytest.raises(BagError):
        b.pop(3)
    assert b.peek(9) and len(b.peek(9)) == 2


def test_delete_all_and_errors():
    b = Bag()
    hs = b.batch_insert(list(range(9)))
    assert sorted(b.batch_delete(hs)) == list(range(9)) and len(b) == 0
    b = Bag()
    hs = b.batch_insert([1, 2, 3])
    assert b.batch_delete([]) == [] and len(b) == 3
    with pytest.raises(BagError, match="duplicate"):
        b.batch_delete([hs[0], hs[0]])
    b.batch_delete([hs[1]])
    with pytest.raises(BagError, match="dead"):
        b.batch_delete([hs[1]])
    other = Bag()
    oh = other.batch_insert([5])
    with pytest.raises(BagError, match="another bag"):
        b.batch_delete(oh)
    b.check()
    assert sorted(b.items()) == [1, 3]


def test_peek_touches_are_logarithmic():
    b = Bag(range(100))
    with prims.touches() as t:
        assert len(b.peek(3)) == 3
    assert t[0] <= touch_cap(3, 100)


def test_handles_survive_hole_filling():
    rng = random.Random(3)
    b = Bag()
    live = {}
    for h in b.batch_insert(list(range(200))):
        live[h.item] = h
    for _ in range(30):
        doomed = rng.sample(sorted(live), min(len(live), rng.randint(1, 12)))
        b.batch_delete([live.pop(x) for x in doomed])
        for x, h in live.items():
            assert h.alive and h.get() == x and h.bag is b
        b.check()


def _bag_interleaving(ops: int, seed: int) -> None:
    """Random interleaving against a naive multiset, checked after every op,
    with a per-call touch assertion."""
    rng = random.Random(seed)
    bag = Bag()
    ref = NaiveMultiset()
    handles: list = []
    nxt = 0
    for step in range(ops):
        r = rng.random()
        size = len(bag)
        with prims.touches() as t:
            if r < 0.35 or size == 0:
                k = rng.randint(0, 8)
                items = list(range(nxt, nxt + k))
                nxt += k
                handles += bag.batch_insert(items)
                ref.add(items)
                cap = TOUCH_K * (k + 1)
            elif r < 0.6:
                k = rng.randint(1, min(size, 8))
                idx = rng.sample(range(len(handles)), k)
                chosen = [handles[i] for i in idx]
                for i in sorted(idx, reverse=True):
                    handles[i] = handles[-1]
                    handles.pop()
                got = bag.batch_delete(chosen)
                ref.remove(got)
                cap = 2 * touch_cap(k, size)
            elif r < 0.8:
                k = rng.randint(0, min(size, 8))
                got = bag.pop(k)
                ref.remove(got)
                handles = [h for h in handles if h.alive]
                cap = touch_cap(k, size)
            else:
                k = rng.randint(0, size + 2)
                p = bag.peek(k)
                assert p == bag.peek(k)
                assert len(p) == min(k, size)
                cap = 2 * touch_cap(min(k, size), size)
        assert t[0] <= cap, (step, t[0], cap)
        assert Counter(bag.items()) == ref.as_counter()
        assert skew_predicate(bag.weights())
        if step % 997 == 0:
            bag.check()


def test_bag_interleaving_small():
    _bag_interleaving(5000, 11)


@pytest.mark.slow
def test_bag_interleaving_long():
    _bag_interleaving(100_000, 12)


# -- pannier -------------------------------------------------------------------


def test_pannier_example():
    p = Pannier()
    p.insert_front(["a", "b"])
    p.insert_back(["c", "d"])
    seen = []
    out = p.pop(3, on_promote=lambda q, phase: seen.append(phase))
    assert set(out[:2]) == {"a", "b"} and out[2] in {"c", "d"}
    assert seen == ["before", "after"]
    assert len(p.front) == 1 and len(p.back) == 0


def test_pannier_pop_zero_and_all():
    p = Pannier()
    p.insert_front([1])
    p.insert_back([2, 3])
    assert p.pop(0) == [] and len(p) == 3
    assert sorted(p.pop(3)) == [1, 2, 3] and len(p) == 0
    with pytest.raises(BagError):
        p.pop(1)


def test_pannier_peek_matches_pop():
    p = Pannier()
    p.insert_front(list(range(5)))
    p.insert_back(list(range(5, 12)))
    want = p.peek(8)
    assert want[:5] == p.front.peek(5)
    assert p.pop(8) == want


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 6)), max_size=60))
def test_pannier_against_two_multisets(ops):
    p = Pannier()
    front, back = NaiveMultiset(), NaiveMultiset()
    nxt = 0
    for op, k in ops:
        if op == 0:
            items = list(range(nxt, nxt + k))
            nxt += k
            p.insert_front(items)
            front.add(items)
        elif op == 1:
            items = list(range(nxt, nxt + k))
            nxt += k
            p.insert_back(items)
            back.add(items)
        else:
            k = min(k, len(p))
            nf = len(front)
            got = p.pop(k)
            if k <= nf:
                front.remove(got)
            else:
                front.remove(got[:nf])
                back.remove(got[nf:])
                front, back = back, NaiveMultiset()
        assert Counter(p.front.items()) == front.as_counter()
        assert Counter(p.back.items()) == back.as_counter()
