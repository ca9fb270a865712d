"""Maximal matching and palette coloring on top of a maintained orientation.

Both consume the edge journal of one orientation update: a map from every
touched edge to its (tail before, tail after), None meaning absent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable

import numpy as np

from .graph import Batch, OrientedGraph, log2n


class PaletteExhausted(RuntimeError):
    """palette exhaustion: no palette color avoids every out-neighbor's palette"""


def _heads(G: OrientedGraph, v: int) -> list[int]:
    return [r.head for r in G.out[v].items()]


def greedy_maximal_matching(pairs: Iterable[tuple[int, int]], free, rng: random.Random) -> list[tuple[int, int]]:
    """Greedy matching under random edge priorities; `free(v)` says whether v
    may still be matched.  Same output as the parallel rounds that keep every
    locally highest-priority edge."""
    pairs = list(dict.fromkeys(pairs))
    pri = [rng.random() for _ in pairs]
    taken: set[int] = set()
    out = []
    for i in sorted(range(len(pairs)), key=pri.__getitem__):
        a, b = pairs[i]
        if a != b and a not in taken and b not in taken and free(a) and free(b):
            taken.update((a, b))
            out.append((a, b))
    return out


@dataclass
class MatchingDelta:
    matched: list[tuple[int, int]] = field(default_factory=list)
    freed: list[int] = field(default_factory=list)
    rounds: int = 0
    scanned: int = 0


class DynamicMatching:
    """Maximal matching with, per vertex v, the ordered set I[v] of unmatched
    in-neighbors (u with u -> v and u unmatched)."""

    def __init__(self, n: int, seed: int = 0) -> None:
        self.n = n
        self.mate: list[int | None] = [None] * n
        self.I: list[dict[int, None]] = [dict() for _ in range(n)]
        self.rng = random.Random(seed)

    def _set_mate(self, G: OrientedGraph, a: int, b: int) -> None:
        for x, y in ((a, b), (b, a)):
            self.mate[x] = y
            for w in _heads(G, x):
                self.I[w].pop(x, None)

    def _unmatch(self, G: OrientedGraph, x: int) -> None:
        self.mate[x] = None
        for w in _heads(G, x):
            self.I[w][x] = None

    def update(self, G: OrientedGraph, batch: Batch, journal: dict) -> MatchingDelta:
        delta = MatchingDelta()
        mate = self.mate
        free = lambda v: mate[v] is None  # noqa: E731
        freed: list[int] = []
        if batch.kind == "delete":
            for k, (before, after) in journal.items():
                a, b = k
                if after is None and mate[a] == b:
                    mate[a] = mate[b] = None
                    freed += [a, b]
        # move in-neighbor entries to the edges' current heads
        for (a, b), (before, after) in journal.items():
            if before is not None:
                self.I[b if before == a else a].pop(before, None)
            if after is not None and mate[after] is None:
                self.I[b if after == a else a][after] = None
        for x in freed:
            self._unmatch(G, x)
        delta.freed = list(freed)
        if batch.kind == "insert":
            cand = [k for k, (before, after) in journal.items() if before is None and after is not None]
            for a, b in greedy_maximal_matching(cand, free, self.rng):
                self._set_mate(G, a, b)
                delta.matched.append((a, b))
        active = [x for x in dict.fromkeys(freed) if mate[x] is None]
        r = 0
        while active:
            r += 1
            width = 1 << (r - 1)
            props = []
            for x in active:
                for w in _heads(G, x):
                    if mate[w] is None:
                        props.append((x, w))
                for u in islice(self.I[x], width):
                    props.append((x, u))
                delta.scanned += min(width, len(self.I[x]))
            for a, b in greedy_maximal_matching(props, free, self.rng):
                self._set_mate(G, a, b)
                delta.matched.append((a, b))
            active = [
                x for x in active
                if mate[x] is None and (self.I[x] or any(mate[w] is None for w in _heads(G, x)))
            ]
        delta.rounds = r
        return delta

    def check(self, G: OrientedGraph) -> list[str]:
        """Validity, maximality and I-table consistency; returns problems."""
        errs = []
        mate = self.mate
        for v, m in enumerate(mate):
            if m is not None and (mate[m] != v or G.find(v, m) is None):
                errs.append(f"vertex {v}: bad mate {m}")
        for (a, b), r in G.index.items():
            if mate[a] is None and mate[b] is None:
                errs.append(f"edge ({a},{b}) has both endpoints unmatched")
        want = [set() for _ in range(self.n)]
        for r in G.index.values():
            if mate[r.tail] is None:
                want[r.head].add(r.tail)
        for v in range(self.n):
            if set(self.I[v]) != want[v]:
                errs.append(f"I[{v}] holds {sorted(self.I[v])}, expected {sorted(want[v])}")
        return errs[:20]


class PaletteColoring:
    """Each vertex owns a random palette from a pool of K_pal * c * log n
    colors (each color kept with probability 1/(2c)) and shows a palette color
    that no out-neighbor's palette contains."""

    def __init__(self, n: int, c: int, K_pal: int = 8, seed: int = 0, log_n: int | None = None) -> None:
        self.n, self.c = n, c
        L = log_n or log2n(n)
        self.pool = K_pal * c * L
        rng = np.random.default_rng(seed)
        self.pal = rng.random((n, self.pool)) < 1 / (2 * c)
        self.color = np.full(n, -1, dtype=np.int64)
        self.recolored = 0

    def palette(self, v: int) -> list[int]:
        return np.nonzero(self.pal[v])[0].tolist()

    def _choose(self, G: OrientedGraph, v: int) -> int:
        heads = _heads(G, v)
        banned = self.pal[heads].any(axis=0) if heads else np.zeros(self.pool, dtype=bool)
        good = self.pal[v] & ~banned
        cur = self.color[v]
        if cur >= 0 and good[cur]:
            return int(cur)
        idx = np.flatnonzero(good)
        if not len(idx):
            raise PaletteExhausted(
                f"palette exhaustion at vertex {v}: out-degree {len(heads)}, palette size {int(self.pal[v].sum())}"
            )
        return int(idx[0])

    def initialize(self, G: OrientedGraph) -> None:
        for v in range(self.n):
            self.color[v] = self._choose(G, v)

    def update(self, G: OrientedGraph, journal: dict) -> list[int]:
        """Recompute the vertices whose out-neighborhood changed."""
        changed = set()
        for before, after in journal.values():
            if before is not None:
                changed.add(before)
            if after is not None:
                changed.add(after)
        moved = []
        for v in sorted(changed):
            old = self.color[v]
            self.color[v] = self._choose(G, v)
            if self.color[v] != old:
                moved.append(v)
        self.recolored += len(moved)
        return moved

    def check(self, G: OrientedGraph) -> list[str]:
        errs = []
        col = self.color
        for v in range(self.n):
            if col[v] < 0 or not self.pal[v, col[v]]:
                errs.append(f"vertex {v}: color {col[v]} outside its palette")
        for (a, b) in G.index:
            if col[a] == col[b]:
                errs.append(f"edge ({a},{b}) is monochromatic")
        return errs[:20]


class AppRunner:
    """Drives an orienter and keeps a matching and/or a coloring in step."""

    def __init__(self, orienter, matching: bool = True, coloring: bool = True,
                 K_pal: int = 8, seed: int = 0) -> None:
        self.o = orienter
        G = orienter.graph
        self.matching = DynamicMatching(G.n, seed) if matching else None
        self.coloring = PaletteColoring(G.n, G.c, K_pal, seed) if coloring else None
        if self.coloring is not None:
            self.coloring.initialize(G)

    def update(self, batch: Batch):
        G = self.o.graph
        G.begin_journal()
        rep = self.o.update(batch)
        journal = G.end_journal()
        md = self.matching.update(G, batch, journal) if self.matching else None
        moved = self.coloring.update(G, journal) if self.coloring else None
        return rep, md, moved

    def check(self) -> list[str]:
        G = self.o.graph
        errs = []
        if self.matching:
            errs += self.matching.check(G)
        if self.coloring:
            errs += self.coloring.check(G)
        return errs
