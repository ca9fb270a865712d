"""Roughly sorted list: vertices bucketed by value into strata of width c'.

Stratum 0 holds value 0, stratum i in [1, M] holds values in ((i-1)c', ic'],
and stratum M+1 holds everything above Mc'.  An integer bitmask records the
nonempty strata so scans from the top skip empty ones.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .prims import COUNTER, semisort_group
from .skewbag import Bag, Handle


class StaleValueError(ValueError):
    pass


def band(value: int, c1: int) -> int:
    """Unclipped stratum index of a value: ceil(value / c')."""
    return -(-value // c1) if value > 0 else 0


class RoughlySortedList:
    def __init__(self, n: int, c1: int, M: int, values: Sequence[int] | None = None) -> None:
        if c1 < 1 or M < 1:
            raise ValueError("rounding and stratum count must be positive")
        self.n = n
        self.c1 = c1
        self.M = M
        self._bags = [Bag() for _ in range(M + 2)]
        self._value = list(values) if values is not None else [0] * n
        self._handle: list[Handle | None] = [None] * n
        self._mask = 0
        for s, vs in semisort_group((self.stratum(x), v) for v, x in enumerate(self._value)):
            for h in self._bags[s].batch_insert(vs):
                self._handle[h.item] = h
            self._mask |= 1 << s

    def stratum(self, value: int) -> int:
        return min(band(value, self.c1), self.M + 1)

    def value(self, v: int) -> int:
        return self._value[v]

    def bag(self, i: int) -> Bag:
        return self._bags[i]

    def size(self, i: int) -> int:
        return len(self._bags[i])

    def nonempty_desc(self, top: int | None = None) -> Iterator[int]:
        """Nonempty stratum indices from `top` (default M+1) downward."""
        top = self.M + 1 if top is None else top
        if top < 0:
            return
        m = self._mask & ((1 << (top + 1)) - 1)
        while m:
            i = m.bit_length() - 1
            yield i
            m ^= 1 << i

    def batch_update(self, updates: Sequence[tuple[int, int, int]]) -> None:
        """Apply (vertex, old value, new value) triples; old must match what is stored."""
        seen = set()
        for v, old, _ in updates:
            if v in seen:
                raise ValueError(f"vertex {v} appears twice in one update")
            seen.add(v)
            if self._value[v] != old:
                raise StaleValueError(f"vertex {v}: stored value {self._value[v]}, caller said {old}")
        moves = []
        for v, old, new in updates:
            self._value[v] = new
            so, sn = self.stratum(old), self.stratum(new)
            if so != sn:
                moves.append((v, so, sn))
        COUNTER.add(len(updates))
        if not moves:
            return
        for s, hs in semisort_group((so, self._handle[v]) for v, so, _ in moves):
            bag = self._bags[s]
            bag.batch_delete(hs)
            if len(bag) == 0:
                self._mask &= ~(1 << s)
        for s, vs in semisort_group((sn, v) for v, _, sn in moves):
            for h in self._bags[s].batch_insert(vs):
                self._handle[h.item] = h
            self._mask |= 1 << s

    def prefix(self, w: int) -> list[int]:
        """w vertices such that a vertex in a higher stratum is never left out
        while one from a lower stratum is taken."""
        if w > self.n:
            raise ValueError(f"prefix of {w} from {self.n} vertices")
        out: list[int] = []
        for i in self.nonempty_desc():
            if len(out) >= w:
                break
            out += self._bags[i].peek(w - len(out))
        return out

    def check(self) -> None:
        for i, bag in enumerate(self._bags):
            bag.check()
            assert bool(self._mask >> i & 1) == (len(bag) > 0), i
            for v in bag.items():
                assert self.stratum(self._value[v]) == i, (v, i)
                assert self._handle[v].bag is bag
        assert sum(len(b) for b in self._bags) == self.n
