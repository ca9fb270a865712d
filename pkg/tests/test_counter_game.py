from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchorient.counter_game import (
    CounterState, IllegalMoveError, MoveRecord, check_move, compress_dips, greedy_adversary,
    is_legal_move, play_sequence, random_move, random_sequence, validate_sequence, weight_above,
)
from oracles import naive_move_violation, naive_weight_above


def _naive(v):
    return None if v is None else (v.rule, v.index)


def test_figure_style_move():
    # 11 units leave the above-threshold counters, 10 arrive, nothing exceeds 13
    u = [16, 12, 13, 5, 8, 2]
    u2 = [10, 10, 10, 13, 10, 2]
    assert sum(u) - sum(u2) == 1
    assert is_legal_move(u, u2, 10, 3) == (True, None)


def test_identity_and_rule_violations():
    u = [Fraction(7, 2), 1, 4]
    # the identity is legal exactly when no counter already sits above T + H
    for T in (3, 4, 9):
        assert check_move(u, u, T, 1) is None
    assert check_move(u, u, 2, 1).rule == "R3"
    v = check_move([5, 3, 1], [5, 2, 1], 4, 2)
    assert (v.rule, v.index) == ("R1", 1)
    v = check_move([5, 3], [4, 5], 3, 3)
    assert (v.rule, v.index) == ("R2", None)
    v = check_move([9, 1], [5, 5], 3, 1)
    assert (v.rule, v.index) == ("R3", 0)
    with pytest.raises(ValueError):
        check_move([1], [1, 2], 0, 1)
    with pytest.raises(ValueError):
        CounterState([-1])


def test_weight_above_examples():
    assert weight_above([1, 2], 2) == 0
    assert weight_above([5, 1], 2) == 3
    assert weight_above([Fraction(1, 3), 4], 0) == Fraction(13, 3)


weights = st.lists(st.fractions(0, 20, max_denominator=6), min_size=1, max_size=6)


@settings(max_examples=300)
@given(weights, st.data(), st.fractions(0, 20, max_denominator=4), st.fractions(Fraction(1, 4), 5, max_denominator=4))
def test_validator_matches_naive_oracle(u, data, T, H):
    u2 = data.draw(st.lists(st.fractions(0, 25, max_denominator=6), min_size=len(u), max_size=len(u)))
    assert _naive(check_move(u, u2, T, H)) == naive_move_violation(u, u2, T, H)
    L = data.draw(st.fractions(0, 20, max_denominator=5))
    assert weight_above(u, L) == naive_weight_above(u, L)


def test_large_numerators_switch_to_exact_objects():
    big = 1 << 60
    s = CounterState([big, 1])
    assert s.num.dtype == object and s.max() == big
    assert check_move([big, 1], [big, 1], big, 1) is None


def test_compress_examples():
    assert compress_dips([], 1) == []
    rng = np.random.default_rng(0)
    inc = random_sequence(8, 4, 1, 6, rng, increasing=True)
    assert [m.T for m in compress_dips(inc, 1)] == [m.T for m in inc]
    # a three-move dip: T1 < T2 >= T3
    u1 = CounterState([6, 6, 6])
    u2 = CounterState([5, 7, 6])
    u3 = CounterState([5, 6, 6])
    u4 = CounterState([5, 6, 5])
    moves = [MoveRecord(u1, u2, 4), MoveRecord(u2, u3, 6), MoveRecord(u3, u4, 5)]
    out = compress_dips(moves, 3)
    assert [m.T for m in out] == [4, 5] and out[-1].after == u4 and out[1].before == u2
    # equal thresholds also count as a dip, so 5, 6, 5 collapses to one move
    moves = [MoveRecord(u1, u2, 5), MoveRecord(u2, u3, 6), MoveRecord(u3, u4, 5)]
    assert [m.T for m in compress_dips(moves, 3)] == [5]
    assert all(a.T < b.T for a, b in zip(out, out[1:]))


def test_illegal_sequences_are_reported():
    u = CounterState([4, 4])
    with pytest.raises(IllegalMoveError) as e:
        validate_sequence([MoveRecord(u, CounterState([1, 4]), 3)], 1)
    assert e.value.index == 0 and e.value.violation.rule == "R1"
    with pytest.raises(IllegalMoveError):
        validate_sequence([MoveRecord(u, u, 1), MoveRecord(CounterState([3, 4]), CounterState([3, 4]), 1)], 1)


def test_identity_sequence_max_is_start():
    u = CounterState.uniform(5, 7)
    st_ = play_sequence([MoveRecord(u, u, t) for t in range(6, 9)], 1)
    assert st_.max_weight == 7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_weights_down_below_threshold(seed, h):
    rng = np.random.default_rng(seed)
    u = CounterState(num=rng.integers(0, 40, size=12), den=3)
    T = int(rng.integers(0, 40))
    u2 = random_move(u, T, h, rng)
    assert check_move(u, u2, Fraction(T, 3), Fraction(h, 3)) is None
    for L in range(0, T + 1, 3):
        assert weight_above(u2, Fraction(L, 3)) <= weight_above(u, Fraction(L, 3))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_state_freezes_above_previous_max(seed):
    rng = np.random.default_rng(seed)
    u = CounterState(num=rng.integers(0, 30, size=8), den=2)
    T = Fraction(int(u.num.max()) + int(rng.integers(1, 5)), 2)
    assert random_move(u, int(T * 2), 3, rng) == u
    # R1 forbids any decrease and R2 then any increase
    pert = u.num + rng.integers(-2, 3, size=8)
    u2 = CounterState(num=np.maximum(pert, 0), den=2)
    if not u2 == u:
        assert check_move(u, u2, T, Fraction(3, 2)) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_sequences_compress_and_halve(seed):
    rng = np.random.default_rng(seed)
    seq = random_sequence(16, 6, 2, 15, rng, climb=bool(seed % 2))
    out = compress_dips(seq, 2)
    validate_sequence(out, 2)
    assert all(a.T < b.T for a, b in zip(out, out[1:]))
    assert out[-1].after == seq[-1].after
    assert play_sequence(out, 2).halving_holds


def test_greedy_adversary_stays_within_scale():
    n, H = 256, 2
    seq = greedy_adversary(n, H + 1, H, 200)
    st_ = play_sequence(seq, H)
    assert st_.max_weight <= 1 * (H + 1 + H * math.log2(n))
