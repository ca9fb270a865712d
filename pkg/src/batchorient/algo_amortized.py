"""Amortized batch algorithm: orient new edges arbitrarily, then statically
re-orient every out-edge of the vertices that went over a cutoff."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import Batch, OrientedGraph, log2n
from .prims import COUNTER
from .skewbag import Bag
from .static_orient import static_orientation
from .updates import Orienter, UpdateReport


@dataclass(frozen=True)
class AmortizedParams:
    c: int
    tau_star: Fraction
    tau_prime: Fraction
    tau: Fraction

    @classmethod
    def default(cls, c: int) -> "AmortizedParams":
        ts = Fraction(6 * c, 5)
        tp = Fraction(11 * c, 5)
        return cls(c, ts, tp, 2 * ts + tp + Fraction(c, 5))

    def __post_init__(self) -> None:
        for name in ("tau_star", "tau_prime", "tau"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if min(self.tau_star, self.tau_prime, self.tau) <= self.c:
            raise ValueError("every threshold must exceed c")
        if not self.tau > 2 * self.tau_star + self.tau_prime - 1:
            raise ValueError("cutoff must exceed 2*tau_star + tau_prime - 1")
        if not 0 < self.eps <= 2:
            raise ValueError("tau_prime must lie in (2c, 4c]")

    @property
    def eps(self) -> Fraction:
        """Static quality that makes (2 + eps)c equal the static threshold."""
        return self.tau_prime / self.c - 2

    @property
    def bound(self) -> Fraction:
        return self.tau + self.tau_prime


class DegreePartition:
    """Vertices split at out-degree tau into a low bag and a high bag."""

    def __init__(self, n: int, tau: Fraction) -> None:
        self.tau = tau
        self.low = Bag()
        self.high = Bag()
        self._h = self.low.batch_insert(range(n))
        self._is_high = [False] * n

    def refresh(self, vertices: Iterable[int], dout: list[int]) -> None:
        up, down = [], []
        for v in vertices:
            hi = dout[v] > self.tau
            if hi != self._is_high[v]:
                (up if hi else down).append(v)
        if up:
            self.low.batch_delete([self._h[v] for v in up])
            for h in self.high.batch_insert(up):
                self._h[h.item] = h
        if down:
            self.high.batch_delete([self._h[v] for v in down])
            for h in self.low.batch_insert(down):
                self._h[h.item] = h
        for v in up:
            self._is_high[v] = True
        for v in down:
            self._is_high[v] = False

    def high_vertices(self) -> list[int]:
        return self.high.peek(len(self.high))

    def is_high(self, v: int) -> bool:
        return self._is_high[v]


def amortized_update(
    G: OrientedGraph, batch: Batch, params: AmortizedParams, part: DegreePartition
) -> UpdateReport:
    rep = UpdateReport("amortized", batch.kind, len(batch))
    recs = G.apply_batch(batch)
    part.refresh({r.tail for r in recs}, G.dout)
    if batch.kind == "insert":
        hv = part.high_vertices()
        if hv:
            pool = [r for v in hv for r in G.out[v].peek(G.dout[v])]
            rep.edges_to_static = len(pool)
            res = static_orientation([(r.tail, r.head) for r in pool], G.c, params.eps)
            want = {(a, b) if a < b else (b, a): a for a, b in res.oriented}
            changed = [r for r in pool if want[r.key] != r.tail]
            G.flip_edges(changed)
            COUNTER.add(len(pool))
            touched = {r.u for r in changed} | {r.v for r in changed}
            part.refresh(touched, G.dout)
            G.clear_prev(changed)
            rep.flips = len(changed)
    rep.max_outdegree = G.max_out_degree()
    return rep


class AmortizedOrienter(Orienter):
    name = "amortized"

    def __init__(self, n: int, c: int, params: AmortizedParams | None = None) -> None:
        self.params = params or AmortizedParams.default(c)
        bound = int(self.params.bound) + 1
        super().__init__(OrientedGraph(n, c, c1=1, M=bound + log2n(n)))
        self.partition = DegreePartition(n, self.params.tau)

    def update(self, batch: Batch) -> UpdateReport:
        return amortized_update(self.graph, batch, self.params, self.partition)
