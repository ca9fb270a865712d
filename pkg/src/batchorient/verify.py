"""Verification harness: potential accounting against a frozen reference
orientation, (H,T)-bounded call checks, skyline properties, and brute-force
oracles for orientation quality and arboricity.

Potentials are kept as integers scaled by the denominator of eps, so every
comparison is exact; `potential_of` returns the Fraction.
"""

from __future__ import annotations

import functools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Batch, EdgeRecord, OrientedGraph, canonical
from .prims import uncharged
from .skyline import check_skyline, weight_profile
from .static_orient import static_orientation


class VerificationError(AssertionError):
    def __init__(self, report: "Report") -> None:
        super().__init__(report.to_json())
        self.report = report


class OracleSizeError(ValueError):
    pass


@dataclass
class Report:
    check: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self, **extra) -> str:
        d = {"check": self.check, "ok": self.ok, **extra}
        d.update({k: _jsonable(v) for k, v in self.detail.items()})
        return json.dumps(d, sort_keys=True)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


# -- oracles ------------------------------------------------------------------


def _assign(edges: Sequence[tuple[int, int]], k: int):
    """Max-flow edge-to-endpoint assignment with vertex capacity k.
    Returns the list of tails if every edge is assigned, else None."""
    m = len(edges)
    verts = sorted({x for e in edges for x in e})
    idx = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    src, sink = 0, 1 + m + nv
    rows, cols, caps = [], [], []
    for i, (a, b) in enumerate(edges):
        rows += [src, 1 + i, 1 + i]
        cols += [1 + i, 1 + m + idx[a], 1 + m + idx[b]]
        caps += [1, 1, 1]
    for j in range(nv):
        rows.append(1 + m + j)
        cols.append(sink)
        caps.append(k)
    size = sink + 1
    cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(size, size))
    res = maximum_flow(cap, src, sink)
    if res.flow_value < m:
        return None
    flow = res.flow.tocsr()
    tails = []
    for i, (a, b) in enumerate(edges):
        tails.append(a if flow[1 + i, 1 + m + idx[a]] > 0 else b)
    return tails


def min_max_outdegree(edges: Sequence[tuple[int, int]]) -> tuple[int, list[int]]:
    """Exact optimum and an optimal tail per edge (binary search on k)."""
    edges = [tuple(e) for e in edges]
    if not edges:
        return 0, []
    deg = Counter(x for e in edges for x in e)
    lo = max(1, -(-len(edges) // len(deg)))
    hi = max(deg.values())
    best = _assign(edges, hi)
    while lo < hi:
        mid = (lo + hi) // 2
        got = _assign(edges, mid)
        if got is None:
            lo = mid + 1
        else:
            hi, best = mid, got
    if best is None or hi != lo:
        best = _assign(edges, lo)
    return lo, best


def min_max_outdegree_oracle(edges: Sequence[tuple[int, int]], limit: int = 10_000) -> int:
    if len(edges) > limit:
        raise OracleSizeError(f"{len(edges)} edges exceed the oracle limit {limit}")
    return min_max_outdegree(edges)[0]


def arboricity_oracle(edges: Iterable[tuple[int, int]], n: int) -> int:
    """max over vertex subsets S with |S| >= 2 of ceil(|E(S)| / (|S| - 1))."""
    if n > 15:
        raise OracleSizeError("the subset scan is limited to n <= 15")
    edges = list(edges)
    if n < 2 or not edges:
        return 0
    subsets = np.arange(1 << n, dtype=np.int64)
    inside = np.zeros(1 << n, dtype=np.int64)
    for a, b in edges:
        inside += (subsets >> a) & (subsets >> b) & 1
    size = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        size += (subsets >> i) & 1
    ok = size >= 2
    dens = -(-inside[ok] // (size[ok] - 1))
    return int(dens.max())


# -- reference orientation and potentials --------------------------------------


@dataclass
class ReferenceOrientation:
    tails: dict[tuple[int, int], int]
    bound: int  # guaranteed max out-degree
    kind: str = "static"

    @classmethod
    def static(cls, edges: Sequence[tuple[int, int]], c: int, eps=1) -> "ReferenceOrientation":
        res = static_orientation(edges, c, eps)
        tails = {(a, b) if a < b else (b, a): a for a, b in res.oriented}
        return cls(tails, math.floor((2 + Fraction(eps)) * c), "static")

    @classmethod
    def optimal(cls, edges: Sequence[tuple[int, int]]) -> "ReferenceOrientation":
        keys = [(a, b) if a < b else (b, a) for a, b in edges]
        k, tails = min_max_outdegree(keys)
        return cls(dict(zip(keys, tails)), k, "optimal")

    def max_out_degree(self) -> int:
        return max(Counter(self.tails.values()).values(), default=0)


class PotentialTable:
    """Edge prices with eps = a/q, stored as numerators over q."""

    def __init__(self, eps, delta: int) -> None:
        self.eps = Fraction(eps)
        self.delta = delta
        a, q = self.eps.numerator, self.eps.denominator
        self.q = q
        self.good_front = q + 2 * a
        self.good_back = q - a
        self.bad_front = q
        self.bad_back_first = q + a
        self.bad_back_rest = q
        self.first = 3 * delta

    def price(self, gf: int, bf: int, gb: int, bb: int) -> int:
        head = min(bb, self.first)
        return (
            gf * self.good_front + bf * self.bad_front + gb * self.good_back
            + head * self.bad_back_first + (bb - head) * self.bad_back_rest
        )


def _good(ref: ReferenceOrientation, r, missing: str) -> bool:
    t = ref.tails.get(r.key)
    if t is None:
        if missing == "bad":
            return False
        raise VerificationError(Report("reference", False, {"edge": list(r.key), "why": "edge not covered"}))
    return t == r.tail


def class_counts(G: OrientedGraph, ref: ReferenceOrientation, v: int, missing: str = "error"):
    p = G.out[v]
    gf = sum(1 for r in p.front.items() if _good(ref, r, missing))
    gb = sum(1 for r in p.back.items() if _good(ref, r, missing))
    return gf, len(p.front) - gf, gb, len(p.back) - gb


def edge_classes(G: OrientedGraph, ref: ReferenceOrientation, eps, delta: int, v: int) -> list[tuple[Any, str, Fraction]]:
    """(edge, class, price) for v's pannier in pop order; the first 3*delta bad
    back edges in peek order carry the 1+eps price."""
    eps = Fraction(eps)
    out = []
    p = G.out[v]
    for r in p.front.peek(len(p.front)):
        g = _good(ref, r, "error")
        out.append((r, "good-front" if g else "bad-front", 1 + 2 * eps if g else Fraction(1)))
    seen_bad = 0
    for r in p.back.peek(len(p.back)):
        if _good(ref, r, "error"):
            out.append((r, "good-back", 1 - eps))
        else:
            seen_bad += 1
            out.append((r, "bad-back", 1 + eps if seen_bad <= 3 * delta else Fraction(1)))
    return out


def potential_of(G: OrientedGraph, ref: ReferenceOrientation, v: int, eps, delta: int) -> Fraction:
    tab = PotentialTable(eps, delta)
    return Fraction(tab.price(*class_counts(G, ref, v)), tab.q)


def potential_vector(G: OrientedGraph, ref: ReferenceOrientation, tab: PotentialTable, missing: str = "error") -> list[int]:
    """Scaled potentials (numerators over tab.q) for every vertex."""
    tails = ref.tails
    out = [0] * G.n
    for v in range(G.n):
        if G.dout[v] == 0:
            continue
        p = G.out[v]
        gf = gb = 0
        for r in p.front.items():
            t = tails.get(r.key)
            if t is None and missing != "bad":
                _good(ref, r, missing)
            gf += t == r.tail
        for r in p.back.items():
            t = tails.get(r.key)
            if t is None and missing != "bad":
                _good(ref, r, missing)
            gb += t == r.tail
        out[v] = tab.price(gf, len(p.front) - gf, gb, len(p.back) - gb)
    return out


def check_degree_potential_bounds(
    G: OrientedGraph, ref: ReferenceOrientation, eps, delta: int, pvec: list[int] | None = None
) -> Report:
    """d(v) + 5*delta*eps >= p(v) >= d(v) - delta*eps for all v, and the
    top-potential vertex sits within 6*delta*eps of every top-degree vertex."""
    tab = PotentialTable(eps, delta)
    if pvec is None:
        pvec = potential_vector(G, ref, tab)
    q, a = tab.q, tab.eps.numerator
    for v in range(G.n):
        d = G.dout[v]
        if not (d * q - delta * a <= pvec[v] <= d * q + 5 * delta * a):
            return Report("degree-potential", False, {
                "vertex": v, "degree": d, "potential": Fraction(pvec[v], q), "delta": delta, "eps": tab.eps,
            })
    if G.n:
        top = max(pvec)
        dmax = G.max_out_degree()
        worst = min(pvec[v] for v in range(G.n) if G.dout[v] == dmax)
        if top - worst > 6 * delta * a:
            return Report("potential-resolution", False, {
                "max_potential": Fraction(top, q), "at_max_degree": Fraction(worst, q),
                "beta": Fraction(6 * delta * a, q),
            })
    return Report("degree-potential", True)


def check_ht_bounded(
    r: Sequence[int], q: Sequence[int], degrees_after: Sequence[int], b: int, T: int | None,
    H: int, eta: int, eps, delta: int, scale: int | None = None,
) -> Report:
    """Classify one call as trivial (max out-degree <= 8*delta afterwards) or
    check the three (H,T)-bounded conditions.  r and q are potentials scaled
    by `scale` (default: the denominator of eps)."""
    eps = Fraction(eps)
    scale = scale or eps.denominator
    dmax = max(degrees_after, default=0)
    if dmax <= 8 * delta:
        return Report("ht-bounded", True, {"class": "trivial", "max_outdegree": dmax})
    if T is None:
        return Report("ht-bounded", False, {"class": "violation", "why": "no threshold", "max_outdegree": dmax})
    floor = (T - delta * eps) * scale
    for v, (rv, qv) in enumerate(zip(r, q)):
        if qv < min(rv, floor):
            return Report("ht-bounded", False, {
                "class": "violation", "condition": 1, "vertex": v,
                "r": Fraction(rv, scale), "q": Fraction(qv, scale), "T": T,
            })
    change = Fraction(sum(q) - sum(r), scale)
    if change > -b * eta * eps:
        return Report("ht-bounded", False, {
            "class": "violation", "condition": 2, "change": change, "required": -b * eta * eps,
        })
    if not T <= dmax <= T + H:
        return Report("ht-bounded", False, {
            "class": "violation", "condition": 3, "T": T, "H": H, "max_outdegree": dmax,
        })
    return Report("ht-bounded", True, {"class": "bounded", "T": T, "H": H, "max_outdegree": dmax})


def check_threshold_stability(thresholds: Sequence[int], c1: int) -> Report:
    for i, ti in enumerate(thresholds):
        for j in range(i):
            if ti > thresholds[j] + c1:
                return Report("threshold-stability", False, {"i": i, "j": j, "thresholds": list(thresholds)})
    return Report("threshold-stability", True)


# -- the observer -------------------------------------------------------------


def _free(fn):
    """Checker work must not show up in the algorithm's touch counts."""

    @functools.wraps(fn)
    def inner(*a, **kw):
        with uncharged():
            return fn(*a, **kw)

    return inner


class Verifier:
    """Observer for the worst-case algorithms.  Install with `attach`, then
    bracket every update with before_update / after_update.

    reference: "static" (peeling with eps=1, bound 3c) or "optimal" (max-flow
    optimum).  Its bound must not exceed params.delta, so the reference is a
    valid delta-orientation for the potential table."""

    def __init__(self, params, reference: str = "static", strict: bool = True) -> None:
        self.params = params
        self.reference = reference
        self.strict = strict
        self.tab = PotentialTable(params.eps, params.delta)
        self.failures: list[Report] = []
        self.passed: Counter[str] = Counter()
        self.classes: Counter[str] = Counter()
        self.events: list[dict] = []
        self.ref: ReferenceOrientation | None = None
        self.G: OrientedGraph | None = None
        self._last: list[int] | None = None
        self._last_edges = 0
        self._r: list[int] | None = None
        self._sky: dict | None = None
        self._promo: dict[int, int] = {}
        self._call_thresholds: list[int] = []
        self._drain = True

    def attach(self, G: OrientedGraph) -> "Verifier":
        G.observer = self
        self.G = G
        return self

    # reporting

    def _record(self, rep: Report, **ctx) -> None:
        if rep.ok:
            self.passed[rep.check] += 1
            return
        rep.detail.update(ctx)
        self.failures.append(rep)
        if self.strict:
            raise VerificationError(rep)

    def _pv(self, missing: str = "error") -> list[int]:
        return potential_vector(self.G, self.ref, self.tab, missing)

    # update bracket

    @_free
    def before_update(self, batch: Batch) -> None:
        G = self.G
        if batch.kind == "insert":
            final = list(G.index) + [canonical(*e) for e in batch.edges]
        else:
            gone = {e.key if isinstance(e, EdgeRecord) else canonical(*e) for e in batch.edges}
            final = [k for k in G.index if k not in gone]
        if self.reference == "optimal":
            self.ref = ReferenceOrientation.optimal(final)
        else:
            self.ref = ReferenceOrientation.static(final, G.c, 1)
        if self.ref.max_out_degree() > self.params.delta:
            self._record(Report("reference", False, {
                "why": "reference max out-degree exceeds delta",
                "reference": self.ref.max_out_degree(), "delta": self.params.delta,
            }))
        self._last = self._pv(missing="bad")
        self._last_edges = G.m
        # special-bag drainage is only promised when the bag starts out empty
        self._drain = G.max_out_degree() <= G.rsl.M * G.c1

    @_free
    def after_update(self, report) -> None:
        G = self.G
        q = self._pv()
        self._record(check_degree_potential_bounds(G, self.ref, self.params.eps, self.params.delta, q))
        self._last = None

    # call hooks

    @_free
    def begin_call(self, G: OrientedGraph, call) -> None:
        r = self._pv()
        if self._last is not None:
            grew = G.m - self._last_edges
            gain = sum(r) - sum(self._last)
            cap = max(grew, 0) * (self.tab.q + self.tab.eps.numerator)
            self._record(Report("edge-potential", gain <= cap, {
                "gain": Fraction(gain, self.tab.q), "inserted": grew, "depth": call.depth,
            }))
        self._r = r
        self._call_thresholds = []

    @_free
    def end_call(self, G: OrientedGraph, call) -> None:
        q = self._pv()
        self._record(check_threshold_stability(call.thresholds, G.c1), depth=call.depth)
        T = min(call.thresholds) if call.thresholds else None
        if call.x == 0:
            self.classes["empty"] += 1
        else:
            rep = check_ht_bounded(
                self._r, q, G.dout, call.batch_size, T, self.params.H, self.params.eta,
                self.params.eps, self.params.delta, self.tab.q,
            )
            self._record(rep, depth=call.depth, branch=call.branch)
            if rep.ok:
                self.classes[rep.detail["class"]] += 1
                self.events.append({"depth": call.depth, "branch": call.branch, "class": rep.detail["class"]})
        self._last = q
        self._last_edges = G.m

    # skyline hooks

    @_free
    def before_skyline(self, G: OrientedGraph, sky, kind: str) -> None:
        degrees = list(G.dout)
        errs = check_skyline(degrees, sky)
        self._record(Report("skyline-shape", not errs, {"errors": errs[:5], "x": sky.x, "T": sky.T}))
        if self._drain:
            limit = G.rsl.M * G.c1
            dm = sky.demand_map()
            missed = [v for v in range(G.n) if degrees[v] > limit and dm.get(v, 0) < degrees[v] - limit]
            self._record(Report("special-bag", not missed, {"vertices": missed[:5], "T": sky.T}))
        self._sky = {"degrees": degrees, "P": sum(self._pv())}

    @_free
    def after_skyline(self, G: OrientedGraph, sky, kind: str) -> None:
        snap = self._sky
        self._sky = None
        P = sum(self._pv())
        sufficient = self.params.sufficient(sky.T)
        if kind == "flip" and sufficient:
            need = sky.x * self.tab.eps.numerator
            self._record(Report("flip-release", snap["P"] - P >= need, {
                "release": Fraction(snap["P"] - P, self.tab.q), "x": sky.x, "T": sky.T,
            }))
        if kind == "static" and sufficient:
            self._record(Report("static-release", P <= snap["P"], {
                "change": Fraction(P - snap["P"], self.tab.q), "T": sky.T,
            }))
        if kind == "flip":
            before = weight_profile(snap["degrees"])
            after = weight_profile(G.dout)
            T, c1 = sky.T, sky.c1
            bad = None
            for L in range(len(after)):
                prev = before[L] if L < len(before) else 0
                if L <= T and after[L] > prev:
                    bad = ("down", L, prev, after[L])
                    break
                if L > T and L % c1 == 0 and after[L] > sky.x:
                    bad = ("up", L, prev, after[L])
                    break
            self._record(Report("skyline-weights", bad is None, {"violation": bad, "T": T, "x": sky.x}))

    @_free
    def on_promotion(self, G: OrientedGraph, v: int, phase: str) -> None:
        p = G.out[v]
        val = self.tab.price(*class_counts(G, self.ref, v))
        if phase == "before":
            self._promo[v] = val
            return
        before = self._promo.pop(v)
        moved = len(p.front)
        if moved >= 4 * self.params.delta:
            self._record(Report("queue-swap", val <= before, {
                "vertex": v, "moved": moved,
                "before": Fraction(before, self.tab.q), "after": Fraction(val, self.tab.q),
            }))

    def summary(self) -> dict:
        return {
            "passed": dict(sorted(self.passed.items())),
            "calls": dict(sorted(self.classes.items())),
            "failures": len(self.failures),
        }


class AmortizedChecker:
    """Per-batch checks for the amortized algorithm: the out-degree bound and
    the degree partition."""

    def __init__(self, orienter) -> None:
        self.o = orienter
        self.failures: list[Report] = []
        self.passed: Counter[str] = Counter()

    @_free
    def after_update(self, report) -> list[Report]:
        G = self.o.graph
        params = self.o.params
        out = []
        d = G.max_out_degree()
        out.append(Report("amortized-bound", d <= params.bound, {"max_outdegree": d, "bound": params.bound}))
        part = self.o.partition
        wrong = [v for v in range(G.n) if part.is_high(v) != (G.dout[v] > params.tau)]
        hv = set(part.high_vertices())
        ok = not wrong and hv == {v for v in range(G.n) if part.is_high(v)}
        out.append(Report("partition", ok, {"vertices": wrong[:5]}))
        for rep in out:
            if rep.ok:
                self.passed[rep.check] += 1
            else:
                self.failures.append(rep)
        return out
