"""Worst-case reinsertion update.

Each level flips up to eta same-size skylines, statically orients one more,
pulls the high subset out of that last skyline and reinserts it as the
next level's batch.  The removed set shrinks geometrically, so the number of
levels stays polylogarithmic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algo_twostage import WorstCaseParams
from .graph import Batch, OrientedGraph, log2n
from .skyline import flip, get_demands, high_subset, orient
from .updates import CallRecord, Orienter, UpdateReport


class RecursionGuardError(RuntimeError):
    """The removed set failed to shrink fast enough."""


@dataclass
class ReinsertionParams(WorstCaseParams):
    alpha: int = 0
    lam: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.alpha <= 0:
            self.alpha = 3 * self.c
        self.lam = Fraction(self.lam) if self.lam else Fraction(1, max(2, self.log_n))
        if not 0 < self.lam < 1:
            raise ValueError("lam must lie in (0, 1)")

    @classmethod
    def default(cls, n: int, c: int, **over) -> "ReinsertionParams":
        L = log2n(n)
        kw = dict(
            c=c, log_n=L, delta=3 * c, sigma=L, eps=Fraction(1, max(2, L)),
            c1=-(-c // L), H=-(-5 * c // L),
        )
        kw.update(over)
        return cls(**kw)

    def depth_guard(self, b: int) -> int:
        return 4 * log2n(b + 2) * self.log_n

    @property
    def kept_per_vertex(self) -> int:
        return math.ceil(self.alpha * self.lam)


def reinsertion_update(G: OrientedGraph, batch: Batch, params: ReinsertionParams) -> UpdateReport:
    rep = UpdateReport("reinsertion", batch.kind, len(batch))
    guard = params.depth_guard(len(batch))
    obs = G.observer
    current = batch
    depth = 0
    touched = []
    while len(current):
        if depth >= guard:
            raise RecursionGuardError(f"reinsertion reached depth {depth} (guard {guard})")
        G.apply_batch(current)
        b = len(current)
        x = min(b, G.m)
        call = CallRecord(depth, b, x)
        rep.calls.append(call)
        rep.recursion_depth = depth
        if obs is not None:
            obs.begin_call(G, call)
        removed: list = []
        skies = []
        if x > 0:
            done = False
            for _ in range(params.eta):
                sky = get_demands(G, x)
                call.thresholds.append(sky.T)
                skies.append(sky)
                if not params.sufficient(sky.T):
                    orient(G, sky, G.c, 1)
                    rep.edges_to_static += x
                    done = True
                    break
                flip(G, sky)
            if not done:
                sky = get_demands(G, x)
                call.thresholds.append(sky.T)
                skies.append(sky)
                orient(G, sky, G.c, 1)
                rep.edges_to_static += x
                if params.sufficient(sky.T):
                    F = high_subset(sky.out_after, params.alpha, params.lam)
                    removed = [r for es in F.values() for r in es]
                    G.delete_edges(removed)
                    call.branch = "bounded"
                else:
                    done = True
            if done:
                call.branch = "trivial"
        call.flips = sum(s.flips for s in skies)
        call.removed = len(removed)
        rep.flips += call.flips
        touched += [r for s in skies for rs in s.taken.values() for r in rs]
        if obs is not None:
            obs.end_call(G, call)
        current = Batch.insert([r.key for r in removed])
        depth += 1
    G.clear_prev(touched)
    rep.max_outdegree = G.max_out_degree()
    return rep


class ReinsertionOrienter(Orienter):
    name = "reinsertion"

    def __init__(self, n: int, c: int, params: ReinsertionParams | None = None) -> None:
        self.params = params or ReinsertionParams.default(n, c)
        super().__init__(OrientedGraph(n, c, c1=self.params.c1, M=self.params.M))

    def update(self, batch: Batch) -> UpdateReport:
        return reinsertion_update(self.graph, batch, self.params)
