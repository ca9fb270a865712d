"""Mutable oriented-graph state shared by every algorithm."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .prims import semisort_group
from .rsl import RoughlySortedList
from .skewbag import Bag, Handle, Pannier


class BatchError(ValueError):
    pass


def log2n(n: int) -> int:
    """ceil(log2(max(n, 2)))"""
    return (max(n, 2) - 1).bit_length()


class EdgeRecord:
    __slots__ = ("u", "v", "tail", "prev_tail", "out_h", "inc_h", "glob_h")

    def __init__(self, u: int, v: int) -> None:
        self.u = u
        self.v = v
        self.tail = u
        self.prev_tail: int | None = None
        self.out_h: Handle | None = None
        self.inc_h: tuple[Handle, Handle] | None = None
        self.glob_h: Handle | None = None

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def head(self) -> int:
        return self.v if self.tail == self.u else self.u

    def __repr__(self) -> str:
        return f"Edge({self.tail}->{self.head})"


@dataclass
class Batch:
    kind: str  # "insert" or "delete"
    edges: list = field(default_factory=list)

    @classmethod
    def insert(cls, pairs: Iterable[tuple[int, int]]) -> "Batch":
        return cls("insert", list(pairs))

    @classmethod
    def delete(cls, items: Iterable[Any]) -> "Batch":
        return cls("delete", list(items))

    def __len__(self) -> int:
        return len(self.edges)


def canonical(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class OrientedGraph:
    """Edges with directions, per-vertex out-panniers and incidence bags,
    out-degrees mirrored in a roughly sorted list.

    New edges point out of their lower-id endpoint and land in that
    vertex's back bag.
    """

    def __init__(self, n: int, c: int, c1: int = 1, M: int | None = None) -> None:
        self.n = n
        self.c = c
        self.c1 = c1
        if M is None:
            M = max(1, -(-(8 * c + 8 * log2n(n)) // c1))
        self.out = [Pannier() for _ in range(n)]
        self.inc = [Bag() for _ in range(n)]
        self.edges = Bag()
        self.dout = [0] * n
        self.deg = [0] * n
        self.rsl = RoughlySortedList(n, c1, M)
        self.index: dict[tuple[int, int], EdgeRecord] = {}
        self._hist = [n]
        self._maxd = 0
        self.observer: Any = None
        self.journal: dict | None = None

    # -- queries ------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.index)

    def max_out_degree(self) -> int:
        while self._maxd > 0 and self._hist[self._maxd] == 0:
            self._maxd -= 1
        return self._maxd

    def out_edges(self, v: int) -> list[EdgeRecord]:
        return self.out[v].items()

    def find(self, a: int, b: int) -> EdgeRecord | None:
        return self.index.get(canonical(a, b))

    def orientation(self) -> list[tuple[int, int]]:
        return sorted((r.tail, r.head) for r in self.index.values())

    def digest(self) -> str:
        h = hashlib.sha256()
        for u, v in sorted(self.index):
            h.update(f"{u},{v},{self.index[(u, v)].tail};".encode())
        return h.hexdigest()

    # -- batches --------------------------------------------------------------

    def validate_batch(self, batch: Batch) -> list:
        """Canonical keys (inserts) or records (deletes) of a valid batch."""
        seen: set = set()
        if batch.kind == "insert":
            keys = []
            for a, b in batch.edges:
                if a == b:
                    raise BatchError(f"self-loop ({a},{b})")
                if not (0 <= a < self.n and 0 <= b < self.n):
                    raise BatchError(f"edge ({a},{b}) outside vertex range")
                k = canonical(a, b)
                if k in seen:
                    raise BatchError(f"duplicate edge {k} in batch")
                if k in self.index:
                    raise BatchError(f"edge {k} already present")
                seen.add(k)
                keys.append(k)
            return keys
        if batch.kind == "delete":
            recs = []
            for item in batch.edges:
                k = item.key if isinstance(item, EdgeRecord) else canonical(*item)
                if k in seen:
                    raise BatchError(f"duplicate edge {k} in batch")
                rec = self.index.get(k)
                if rec is None or (isinstance(item, EdgeRecord) and rec is not item):
                    raise BatchError(f"edge {k} is not present")
                seen.add(k)
                recs.append(rec)
            return recs
        raise BatchError(f"unknown batch kind {batch.kind!r}")

    def apply_batch(self, batch: Batch) -> list[EdgeRecord]:
        checked = self.validate_batch(batch)
        if batch.kind == "insert":
            return self.insert_edges(checked)
        self.delete_edges(checked)
        return checked

    def insert_edges(self, keys: Sequence[tuple[int, int]]) -> list[EdgeRecord]:
        recs = [EdgeRecord(u, v) for u, v in keys]
        if not recs:
            return recs
        self._note(recs)
        self.attach(recs, front=False)
        inc = {}
        for v, rs in semisort_group([(r.u, r) for r in recs] + [(r.v, r) for r in recs]):
            for h in self.inc[v].batch_insert(rs):
                inc.setdefault(id(h.item), []).append(h)
        for r in recs:
            r.inc_h = tuple(inc[id(r)])
            self.deg[r.u] += 1
            self.deg[r.v] += 1
            self.index[r.key] = r
        for r, h in zip(recs, self.edges.batch_insert(recs)):
            r.glob_h = h
        delta: dict[int, int] = {}
        for r in recs:
            delta[r.tail] = delta.get(r.tail, 0) + 1
        self.commit_outdeg(delta)
        return recs

    def delete_edges(self, recs: Sequence[EdgeRecord]) -> None:
        if not recs:
            return
        self._note(recs)
        self.detach(recs)
        incs = [(r.u if h._bag is self.inc[r.u] else r.v, h) for r in recs for h in r.inc_h]
        for x, hs in semisort_group(incs):
            self.inc[x].batch_delete(hs)
        self.edges.batch_delete([r.glob_h for r in recs])
        delta: dict[int, int] = {}
        for r in recs:
            delta[r.tail] = delta.get(r.tail, 0) - 1
            self.deg[r.u] -= 1
            self.deg[r.v] -= 1
            del self.index[r.key]
            r.inc_h = r.glob_h = None
        self.commit_outdeg(delta)

    def flip_edges(self, recs: Sequence[EdgeRecord]) -> None:
        if not recs:
            return
        self._note(recs)
        self.detach(recs)
        delta: dict[int, int] = {}
        for r in recs:
            old = r.tail
            r.prev_tail = old
            r.tail = r.v if old == r.u else r.u
            delta[old] = delta.get(old, 0) - 1
            delta[r.tail] = delta.get(r.tail, 0) + 1
        self.attach(recs, front=False)
        self.commit_outdeg(delta)

    # -- low-level pieces used by the skyline engine -----------------------------

    def detach(self, recs: Sequence[EdgeRecord]) -> None:
        """Remove out-handles from their panniers (degrees are not touched)."""
        groups = []
        for r in recs:
            h = r.out_h
            if h is None or not h.alive:
                raise BatchError(f"edge {r.key} has no live out-handle")
            groups.append(((r.tail, h._bag is self.out[r.tail].back), h))
        for _, hs in semisort_group(groups):
            hs[0]._bag.batch_delete(hs)
        for r in recs:
            r.out_h = None

    def attach(self, recs: Sequence[EdgeRecord], front: bool) -> None:
        """Insert edges into their tails' front or back bag (degrees are not touched)."""
        for t, rs in semisort_group((r.tail, r) for r in recs):
            p = self.out[t]
            hs = p.insert_front(rs) if front else p.insert_back(rs)
            for r, h in zip(rs, hs):
                r.out_h = h

    def pop_out(self, demands: Sequence[tuple[int, int]]) -> dict[int, list[EdgeRecord]]:
        """Pop demands[v] edges from each pannier in pop order; handles die."""
        obs = self.observer
        taken: dict[int, list[EdgeRecord]] = {}
        for v, k in demands:
            if k <= 0:
                continue
            hook = None
            if obs is not None:
                hook = lambda p, phase, v=v: obs.on_promotion(self, v, phase)  # noqa: E731
            recs = self.out[v].pop(k, on_promote=hook)
            for r in recs:
                r.out_h = None
            taken[v] = recs
        return taken

    def commit_outdeg(self, delta: dict[int, int]) -> None:
        updates = []
        hist = self._hist
        for v, dd in delta.items():
            if dd == 0:
                continue
            old = self.dout[v]
            new = old + dd
            self.dout[v] = new
            updates.append((v, old, new))
            hist[old] -= 1
            while len(hist) <= new:
                hist.append(0)
            hist[new] += 1
            if new > self._maxd:
                self._maxd = new
        if updates:
            self.rsl.batch_update(updates)

    def _note(self, recs: Sequence[EdgeRecord]) -> None:
        j = self.journal
        if j is None:
            return
        for r in recs:
            k = r.key
            if k not in j:
                j[k] = r.tail if k in self.index else None

    def begin_journal(self) -> None:
        self.journal = {}

    def end_journal(self) -> dict[tuple[int, int], tuple[int | None, int | None]]:
        """Map each touched edge to (tail before, tail after); None means absent."""
        j, self.journal = self.journal or {}, None
        out = {}
        for k, before in j.items():
            rec = self.index.get(k)
            after = rec.tail if rec is not None else None
            if before != after:
                out[k] = (before, after)
        return out

    def clear_prev(self, recs: Iterable[EdgeRecord]) -> None:
        for r in recs:
            r.prev_tail = None

    # -- invariants --------------------------------------------------------------

    def check(self, deep: bool = True) -> None:
        total = 0
        for v in range(self.n):
            p = self.out[v]
            assert len(p) == self.dout[v], (v, len(p), self.dout[v])
            assert len(self.inc[v]) == self.deg[v], v
            total += self.dout[v]
            if deep:
                p.front.check()
                p.back.check()
                for r in p.items():
                    assert r.tail == v and r.out_h is not None and r.out_h.alive
                    assert r.out_h._bag in (p.front, p.back)
                    assert self.index.get(r.key) is r
        assert total == self.m == len(self.edges)
        assert sum(self._hist) == self.n
        for d, cnt in enumerate(self._hist):
            assert cnt == sum(1 for x in self.dout if x == d), d
        for v in range(self.n):
            assert self.rsl.value(v) == self.dout[v], v
        if deep:
            self.rsl.check()
            self.edges.check()
