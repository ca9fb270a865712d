"""Skylines: sets of out-edges taken from the top of the out-degree profile.

For a level L let C_L = sum over v of max(0, d+(v) - L).  A skyline of size x
with rounding c' has a threshold T (a multiple of c') with C_T >= x > C_{T+c'};
it takes everything a vertex has above T + c', and between 0 and c' more
edges per vertex from the band (T, T + c'], for x edges in total.  Edges are
taken in pannier pop order, so the front bag drains first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .graph import EdgeRecord, OrientedGraph
from .rsl import band
from .static_orient import StaticResult, static_orientation


class SkylineError(ValueError):
    pass


@dataclass
class Skyline:
    x: int
    T: int | None
    c1: int
    demands: list[tuple[int, int]] = field(default_factory=list)  # (vertex, count), count > 0
    flips: int = 0
    taken: dict[int, list[EdgeRecord]] = field(default_factory=dict)
    # in-skyline out-edges per vertex after static orientation: kept edges in
    # pop order, then edges acquired from other vertices
    out_after: dict[int, list[EdgeRecord]] = field(default_factory=dict)
    static: StaticResult | None = None

    def demand_map(self) -> dict[int, int]:
        return dict(self.demands)


def weight_above(degrees: Sequence[int], level: int) -> int:
    return sum(d - level for d in degrees if d > level)


def weight_profile(degrees: Sequence[int]) -> list[int]:
    """C_L for L = 0 .. max degree (C is zero beyond)."""
    top = max(degrees, default=0)
    cnt = [0] * (top + 2)
    for d in degrees:
        cnt[d] += 1
    prof = [0] * (top + 1)
    above = 0  # vertices with degree > L
    acc = 0
    for L in range(top, -1, -1):
        above += cnt[L + 1]
        acc += above
        prof[L] = acc
    return prof


def _bands(G: OrientedGraph) -> Iterator[tuple[int, int, Callable[[int], list[int]]]]:
    """Nonempty bands k >= 1 in descending order as (k, size, peek).

    Band k holds vertices with out-degree in ((k-1)c', kc'].  Ordinary strata
    are bands; the special stratum above M is split into its true bands.
    """
    rsl = G.rsl
    c1 = rsl.c1
    dout = G.dout
    for i in rsl.nonempty_desc():
        if i == 0:
            return
        bag = rsl.bag(i)
        if i <= rsl.M:
            yield i, len(bag), bag.peek
            continue
        groups: dict[int, list[int]] = {}
        for v in bag.items():
            groups.setdefault(band(dout[v], c1), []).append(v)
        for k in sorted(groups, reverse=True):
            vs = groups[k]
            yield k, len(vs), (lambda j, vs=vs: vs[:j])


def find_threshold(G: OrientedGraph, x: int) -> int:
    """Largest multiple T of c' with C_T >= x."""
    c1 = G.c1
    dout = G.dout
    s = 0  # C at the current level
    l = 0  # vertices strictly above the current level
    level: int | None = None
    for k, size, peek in _bands(G):
        top = k * c1
        if level is None:
            level = top
        if level > top and l > 0:
            need = x - s
            if l * (level - top) >= need:
                return level - math.ceil(need / (l * c1)) * c1
            s += l * (level - top)
        base = top - c1
        # every vertex of this band has at least one unit above `base`
        s += l * c1 + sum(dout[v] - base for v in peek(min(size, x)))
        l += size
        level = base
        if s >= x:
            return level
    if level is not None and l > 0:
        need = x - s
        j = math.ceil(need / (l * c1))
        if level - j * c1 >= 0:
            return level - j * c1
    raise SkylineError(f"skyline of size {x} exceeds total weight {G.m}")


def _band_vertices(G: OrientedGraph, k: int, limit: int | None = None) -> list[int]:
    """Vertices of band k in deterministic order, at most `limit` of them."""
    rsl = G.rsl
    if k <= rsl.M:
        bag = rsl.bag(k)
        return bag.peek(len(bag) if limit is None else limit)
    vs = [v for v in rsl.bag(rsl.M + 1).items() if band(G.dout[v], G.c1) == k]
    return vs if limit is None else vs[:limit]


def _high_vertices(G: OrientedGraph, lowest: int) -> list[int]:
    """All vertices in bands >= lowest, highest band first."""
    out: list[int] = []
    rsl = G.rsl
    for k, size, peek in _bands(G):
        if k < lowest:
            break
        out += peek(size)
    return out


def get_demands(G: OrientedGraph, x: int) -> Skyline:
    """Demands of a size-x skyline; the graph is not modified."""
    c1 = G.c1
    if x <= 0:
        return Skyline(0, None, c1)
    if x > G.m:
        raise SkylineError(f"skyline of size {x} exceeds total weight {G.m}")
    T = find_threshold(G, x)
    dout = G.dout
    high = _high_vertices(G, T // c1 + 2)
    initial = sum(dout[v] - T - c1 for v in high)
    collect = initial + c1 * len(high)
    demands: list[tuple[int, int]] = []
    if collect >= x:
        # old vertices alone cover x: whole units of c' first, then one remainder
        left = x - initial
        whole, rem = divmod(left, c1)
        for i, v in enumerate(high):
            extra = c1 if i < whole else (rem if i == whole else 0)
            dem = dout[v] - T - c1 + extra
            if dem > 0:
                demands.append((v, dem))
    else:
        for v in high:
            demands.append((v, dout[v] - T))
        left = x - collect
        # each band vertex carries at least one unit above T
        for v in _band_vertices(G, T // c1 + 1, left):
            if left == 0:
                break
            take = min(dout[v] - T, left)
            demands.append((v, take))
            left -= take
        if left:
            raise SkylineError("band below the old vertices ran out; threshold is inconsistent")
    return Skyline(x, T, c1, demands)


def check_skyline(degrees: Sequence[int], sky: Skyline) -> list[str]:
    """Violations of the skyline-by-size constraints against a degree snapshot."""
    errs: list[str] = []
    dem = sky.demand_map()
    if sum(dem.values()) != sky.x:
        errs.append(f"demands sum to {sum(dem.values())}, expected {sky.x}")
    if sky.x == 0:
        return errs
    T, c1 = sky.T, sky.c1
    if T is None or T < 0 or T % c1:
        return errs + [f"threshold {T} is not a nonnegative multiple of {c1}"]
    if weight_above(degrees, T) < sky.x:
        errs.append(f"C_T < x at T={T}")
    if weight_above(degrees, T + c1) >= sky.x:
        errs.append(f"C_(T+c') >= x at T={T}")
    for v, d in enumerate(degrees):
        k = dem.get(v, 0)
        lo = max(0, d - T - c1)
        hi = max(0, d - T)
        if not lo <= k <= hi:
            errs.append(f"vertex {v}: demand {k} outside [{lo}, {hi}] (degree {d})")
    return errs


def _notify(G: OrientedGraph, name: str, sky: Skyline, kind: str) -> None:
    obs = G.observer
    if obs is not None:
        getattr(obs, name)(G, sky, kind)


def flip(G: OrientedGraph, sky: Skyline) -> Skyline:
    """Pop the skyline's edges and flip all of them into the new tails' back bags."""
    if sky.x == 0:
        return sky
    _notify(G, "before_skyline", sky, "flip")
    taken = G.pop_out(sky.demands)
    recs = [r for v, _ in sky.demands for r in taken[v]]
    G._note(recs)
    delta: dict[int, int] = {}
    for r in recs:
        old = r.tail
        r.prev_tail = old
        r.tail = r.v if old == r.u else r.u
        delta[old] = delta.get(old, 0) - 1
        delta[r.tail] = delta.get(r.tail, 0) + 1
    G.attach(recs, front=False)
    G.commit_outdeg(delta)
    sky.taken = taken
    sky.flips = len(recs)
    _notify(G, "after_skyline", sky, "flip")
    return sky


def orient(G: OrientedGraph, sky: Skyline, c: int, eps) -> Skyline:
    """Statically orient the skyline's edges; only edges whose direction
    changed move (to the new tail's back bag), the rest return to the front."""
    if sky.x == 0:
        return sky
    _notify(G, "before_skyline", sky, "static")
    taken = G.pop_out(sky.demands)
    recs = [r for v, _ in sky.demands for r in taken[v]]
    G._note(recs)
    res = static_orientation([(r.tail, r.head) for r in recs], c, eps)
    new_tail = {(a, b) if a < b else (b, a): a for a, b in res.oriented}
    kept: list[EdgeRecord] = []
    moved: list[EdgeRecord] = []
    delta: dict[int, int] = {}
    for r in recs:
        t = new_tail[r.key]
        if t == r.tail:
            kept.append(r)
        else:
            r.prev_tail = r.tail
            r.tail = t
            delta[r.prev_tail] = delta.get(r.prev_tail, 0) - 1
            delta[t] = delta.get(t, 0) + 1
            moved.append(r)
    G.attach(kept, front=True)
    G.attach(moved, front=False)
    G.commit_outdeg(delta)
    out_after: dict[int, list[EdgeRecord]] = {}
    for r in kept:
        out_after.setdefault(r.tail, []).append(r)
    for r in moved:
        out_after.setdefault(r.tail, []).append(r)
    sky.taken = taken
    sky.out_after = out_after
    sky.flips = len(moved)
    sky.static = res
    _notify(G, "after_skyline", sky, "static")
    return sky


def flip_skyline(G: OrientedGraph, x: int) -> Skyline:
    return flip(G, get_demands(G, x))


def static_orient_skyline(G: OrientedGraph, x: int, c: int, eps) -> Skyline:
    return orient(G, get_demands(G, x), c, eps)


def high_subset(out_after: dict[int, list[EdgeRecord]], alpha: int, lam) -> dict[int, list[EdgeRecord]]:
    """Per-vertex tails: everything beyond the first ceil(alpha*lam) in-skyline out-edges."""
    keep = math.ceil(alpha * Fraction(lam))
    F: dict[int, list[EdgeRecord]] = {}
    for v, es in out_after.items():
        if len(es) > alpha:
            raise SkylineError(f"vertex {v} has {len(es)} in-skyline out-edges, above {alpha}")
        if len(es) > keep:
            F[v] = es[keep:]
    return F
