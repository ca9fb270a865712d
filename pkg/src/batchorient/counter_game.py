"""The batch counter game as an executable validator.

A state is n non-negative rational weights.  A move u ->_T u' is legal when

    R1  u'(i) >= min(u(i), T)   for every i
    R2  sum u' <= sum u
    R3  u'(i) <= T + H          for every i

States keep integer numerators over one shared denominator, so checks are
vectorized and still exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_SAFE = 1 << 52


class IllegalMoveError(ValueError):
    def __init__(self, index: int, violation: "Violation") -> None:
        super().__init__(f"move {index} is illegal: {violation}")
        self.index = index
        self.violation = violation


class CounterState:
    """Weights as integer numerators `num` over the denominator `den`."""

    __slots__ = ("num", "den")

    def __init__(self, weights: Iterable = (), *, num=None, den: int = 1) -> None:
        if num is None:
            ws = [Fraction(w) for w in weights]
            den = math.lcm(*(w.denominator for w in ws)) if ws else 1
            num = [w.numerator * (den // w.denominator) for w in ws]
        arr = np.asarray(num)
        if arr.size and int(np.abs(arr).max()) >= _SAFE:
            arr = np.array([int(x) for x in num], dtype=object)
        elif arr.dtype != object:
            arr = arr.astype(np.int64)
        if arr.size and (arr < 0).any():
            raise ValueError("counter weights must be non-negative")
        self.num = arr
        self.den = int(den)

    @classmethod
    def uniform(cls, n: int, Y) -> "CounterState":
        Y = Fraction(Y)
        return cls(num=np.full(n, Y.numerator, dtype=np.int64), den=Y.denominator)

    def __len__(self) -> int:
        return len(self.num)

    def weights(self) -> list[Fraction]:
        return [Fraction(int(x), self.den) for x in self.num]

    def total(self) -> Fraction:
        return Fraction(int(self.num.sum()), self.den)

    def max(self) -> Fraction:
        return Fraction(int(self.num.max()), self.den) if len(self.num) else Fraction(0)

    def scaled(self, den: int) -> np.ndarray:
        f = den // self.den
        out = self.num * f
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, CounterState) or len(self) != len(other):
            return NotImplemented if not isinstance(other, CounterState) else False
        d = math.lcm(self.den, other.den)
        return bool((self.scaled(d) == other.scaled(d)).all())

    def __repr__(self) -> str:
        return f"CounterState({[str(w) for w in self.weights()]})"


def _state(u) -> CounterState:
    return u if isinstance(u, CounterState) else CounterState(u)


@dataclass(frozen=True)
class Violation:
    rule: str  # "R1", "R2" or "R3"
    index: int | None  # offending counter (None for R2)
    detail: str = ""


@dataclass
class MoveRecord:
    before: CounterState
    after: CounterState
    T: Fraction

    def __post_init__(self) -> None:
        self.before = _state(self.before)
        self.after = _state(self.after)
        self.T = Fraction(self.T)


def check_move(u, u2, T, H) -> Violation | None:
    """First violated rule (R1, then R2, then R3; lowest index first) or None."""
    u, u2 = _state(u), _state(u2)
    if len(u) != len(u2):
        raise ValueError(f"state lengths differ: {len(u)} vs {len(u2)}")
    T, H = Fraction(T), Fraction(H)
    d = math.lcm(u.den, u2.den, T.denominator, H.denominator)
    a, b = u.scaled(d), u2.scaled(d)
    t = T.numerator * (d // T.denominator)
    h = H.numerator * (d // H.denominator)
    low = np.minimum(a, t) if a.dtype != object else np.array([min(x, t) for x in a], dtype=object)
    bad = np.nonzero(b < low)[0]
    if len(bad):
        i = int(bad[0])
        return Violation("R1", i, f"{Fraction(int(b[i]), d)} < min({Fraction(int(a[i]), d)}, {T})")
    if b.sum() > a.sum():
        return Violation("R2", None, f"total rose from {Fraction(int(a.sum()), d)} to {Fraction(int(b.sum()), d)}")
    bad = np.nonzero(b > t + h)[0]
    if len(bad):
        i = int(bad[0])
        return Violation("R3", i, f"{Fraction(int(b[i]), d)} > {T} + {H}")
    return None


def is_legal_move(u, u2, T, H) -> tuple[bool, Violation | None]:
    v = check_move(u, u2, T, H)
    return v is None, v


def weight_above(u, L) -> Fraction:
    u = _state(u)
    L = Fraction(L)
    d = math.lcm(u.den, L.denominator)
    a = u.scaled(d)
    lv = L.numerator * (d // L.denominator)
    return Fraction(int(np.maximum(a - lv, 0).sum()), d)


def validate_sequence(moves: Sequence[MoveRecord], H) -> None:
    for k, mv in enumerate(moves):
        v = check_move(mv.before, mv.after, mv.T, H)
        if v is not None:
            raise IllegalMoveError(k, v)
        if k and not moves[k - 1].after == mv.before:
            raise IllegalMoveError(k, Violation("chain", None, "move does not start where the previous one ended"))


def compress_dips(moves: Sequence[MoveRecord], H) -> list[MoveRecord]:
    """Merge the first non-increase T_t >= T_{t+1} into one move
    u_t ->_{T_{t+1}} u_{t+2} until thresholds strictly increase."""
    validate_sequence(moves, H)
    out = list(moves)
    t = 0
    while t + 1 < len(out):
        if out[t].T < out[t + 1].T:
            t += 1
            continue
        merged = MoveRecord(out[t].before, out[t + 1].after, out[t + 1].T)
        v = check_move(merged.before, merged.after, merged.T, H)
        if v is not None:
            raise IllegalMoveError(t, v)
        out[t : t + 2] = [merged]
        t = max(t - 1, 0)
    return out


@dataclass
class GameStats:
    max_weight: Fraction
    thresholds: list[Fraction] = field(default_factory=list)
    weights_above: list[Fraction] = field(default_factory=list)  # w(u_t, T_t)
    milestones: list[int] = field(default_factory=list)
    ratios: list[Fraction | None] = field(default_factory=list)

    @property
    def halving_holds(self) -> bool:
        ws = self.weights_above
        return all(2 * ws[j] <= ws[i] for i, j in zip(self.milestones, self.milestones[1:]))


def play_sequence(moves: Sequence[MoveRecord], H) -> GameStats:
    validate_sequence(moves, H)
    H = Fraction(H)
    if not moves:
        return GameStats(Fraction(0))  # no state to measure
    top = max([moves[0].before.max()] + [mv.after.max() for mv in moves])
    st = GameStats(top)
    for mv in moves:
        st.thresholds.append(mv.T)
        st.weights_above.append(weight_above(mv.before, mv.T))
    ms = [0]
    for z in range(1, len(moves)):
        if st.thresholds[z] - st.thresholds[ms[-1]] >= 2 * H:
            ms.append(z)
    st.milestones = ms
    ws = st.weights_above
    st.ratios = [ws[j] / ws[i] if ws[i] else None for i, j in zip(ms, ms[1:])]
    return st


# -- generators ---------------------------------------------------------------


def random_move(
    u: CounterState, T: int, H: int, rng: np.random.Generator, waste: float = 0.2, focus: int = 0
) -> CounterState:
    """A random legal move on the integer grid of u's denominator; T and H are
    given in grid units.  With focus > 0 the released weight goes to at most
    that many counters (piling), otherwise it is spread at random."""
    a = u.num
    over = a > T
    must = np.maximum(a - (T + H), 0)
    spare = np.where(over, a - T, 0)
    take = must + (rng.random(len(a)) * (spare - must + 1)).astype(np.int64)
    take = np.minimum(take, spare)
    b = a - take
    pool = int(take.sum())
    if rng.random() < waste:
        pool = int(rng.integers(0, pool + 1))
    room = np.maximum(T + H - b, 0)
    if focus:
        for j in rng.permutation(np.nonzero(room)[0])[:focus]:
            add = min(pool, int(room[j]))
            b[j] += add
            pool -= add
    elif pool and room.sum():
        p = rng.random(len(a)) * (room > 0)
        p = p / p.sum()
        give = np.minimum(rng.multinomial(pool, p), room)
        b = b + give
    return CounterState(num=b, den=u.den)


def random_sequence(
    n: int, Y, H, moves: int, rng: np.random.Generator, den: int = 6,
    increasing: bool = False, climb: bool = False,
) -> list[MoveRecord]:
    """Random legal sequence from the uniform state Y on the grid 1/den.
    Thresholds are drawn near the current maximum; `increasing` makes them
    strictly increase and `climb` piles released weight on a few counters so
    the thresholds can keep rising."""
    Y, H = Fraction(Y), Fraction(H)
    den = math.lcm(den, Y.denominator, H.denominator)
    u = CounterState(num=np.full(n, int(Y * den), dtype=np.int64), den=den)
    h = int(H * den)
    out = []
    last = -1
    for _ in range(moves):
        top = int(u.num.max())
        lo = max(0, top - 2 * h)
        hi = top
        if increasing or climb:
            lo = max(lo, last + 1)
        if climb:
            lo, hi = max(lo, top - h), max(lo, top - 1)
        t = int(rng.integers(lo, max(lo, hi) + 1))
        last = t
        nxt = random_move(u, t, h, rng, waste=0.0 if climb else 0.2,
                          focus=int(rng.integers(1, 6)) if climb else 0)
        out.append(MoveRecord(u, nxt, Fraction(t, den)))
        u = nxt
    return out


def _greedy_threshold(a: np.ndarray, h: int) -> int | None:
    """Largest integer T >= 0 with sum max(0, a - T) >= h (binary search)."""
    if int(a.sum()) < h:
        return None
    lo, hi = 0, int(a.max())
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if int(np.maximum(a - mid, 0).sum()) >= h:
            lo = mid
        else:
            hi = mid - 1
    return lo


def greedy_adversary(n: int, Y, H, moves: int, den: int = 4) -> list[MoveRecord]:
    """Take the highest T on the grid 1/den that still frees H, flatten
    everything above it and pile the freed weight onto the tallest counters,
    each up to T+H.  A heuristic probe of the max-weight bound, not a proof."""
    Y, H = Fraction(Y), Fraction(H)
    den = math.lcm(den, Y.denominator, H.denominator)
    h = int(H * den)
    u = CounterState(num=np.full(n, int(Y * den), dtype=np.int64), den=den)
    out = []
    for _ in range(moves):
        a = u.num
        T = _greedy_threshold(a, h)
        if T is None:
            break
        pool = int(np.maximum(a - T, 0).sum())
        b = np.minimum(a, T)
        for j in np.argsort(-a, kind="stable"):
            if pool <= 0:
                break
            add = min(pool, T + h - int(b[j]))
            b[j] += add
            pool -= add
        nxt = CounterState(num=b, den=den)
        if nxt == u:
            break
        out.append(MoveRecord(u, nxt, Fraction(T, den)))
        u = nxt
    return out
