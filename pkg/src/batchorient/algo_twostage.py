"""Worst-case two-stage update: flip one skyline to release potential, then
statically re-orient a second skyline of the same size to cap degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Batch, OrientedGraph, log2n
from .skyline import flip, get_demands, orient
from .updates import CallRecord, Orienter, UpdateReport


@dataclass
class WorstCaseParams:
    """delta: offline out-degree bound; sigma: offline flips per update;
    eps: potential released per flip; c1: skyline rounding; H: degree
    window of a bounded call; M: number of main RSL strata.  log_n is
    ceil(log2(max(n, 2))) for the graph the parameters serve."""

    c: int
    log_n: int
    delta: int
    sigma: int
    eps: Fraction
    c1: int
    H: int
    M: int = 0

    def __post_init__(self) -> None:
        self.eps = Fraction(self.eps)
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.delta < self.c or self.sigma < 0 or self.c1 < 1:
            raise ValueError("need delta >= c, sigma >= 0 and c1 >= 1")
        if self.M <= 0:
            self.M = -(-self.degree_cap // self.c1)

    @property
    def eta(self) -> int:
        return math.ceil(1 + 1 / self.eps + 2 * self.sigma)

    @property
    def beta(self) -> Fraction:
        return 6 * self.delta * self.eps

    @property
    def degree_cap(self) -> int:
        # a generous multiple of the analytic O(delta + (H + delta*eps + 1) log n)
        return 8 * self.delta + 4 * math.ceil(self.H + self.beta + 1) * self.log_n

    def sufficient(self, T: int | None) -> bool:
        return T is not None and T >= 4 * self.delta

    @classmethod
    def twostage(cls, n: int, c: int, **over) -> "WorstCaseParams":
        L = log2n(n)
        s = math.isqrt(L - 1) + 1  # ceil(sqrt(L))
        kw = dict(c=c, log_n=L, delta=c * max(3, s), sigma=s, eps=Fraction(1, max(2, s)), c1=c, H=5 * c)
        kw.update(over)
        return cls(**kw)


def twostage_update(G: OrientedGraph, batch: Batch, params: WorstCaseParams) -> UpdateReport:
    rep = UpdateReport("twostage", batch.kind, len(batch))
    b = len(batch)
    if b == 0:
        rep.max_outdegree = G.max_out_degree()
        return rep
    G.apply_batch(batch)
    obs = G.observer
    x = min(b * params.eta, G.m)
    call = CallRecord(0, b, x)
    rep.calls.append(call)
    if obs is not None:
        obs.begin_call(G, call)
    touched = []
    if x > 0:
        first = get_demands(G, x)
        call.thresholds.append(first.T)
        if not params.sufficient(first.T):
            orient(G, first, G.c, 1)
            call.branch = "trivial"
            skies = [first]
        else:
            flip(G, first)
            second = get_demands(G, x)
            call.thresholds.append(second.T)
            orient(G, second, G.c, 1)
            call.branch = "bounded"
            skies = [first, second]
        call.flips = sum(s.flips for s in skies)
        rep.edges_to_static = x
        touched = [r for s in skies for rs in s.taken.values() for r in rs]
    if obs is not None:
        obs.end_call(G, call)
    G.clear_prev(touched)
    rep.flips = call.flips
    rep.max_outdegree = G.max_out_degree()
    return rep


class TwoStageOrienter(Orienter):
    name = "twostage"

    def __init__(self, n: int, c: int, params: WorstCaseParams | None = None) -> None:
        self.params = params or WorstCaseParams.twostage(n, c)
        super().__init__(OrientedGraph(n, c, c1=self.params.c1, M=self.params.M))

    def update(self, batch: Batch) -> UpdateReport:
        return twostage_update(self.graph, batch, self.params)
