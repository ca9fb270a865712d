"""Round-based peeling that orients an edge set of arboricity at most c so
every vertex has out-degree at most (2+eps)c.

Each round, vertices whose remaining degree is at most (2+eps)c are marked;
every remaining edge with a marked endpoint is oriented out of a marked
endpoint (the lower id when both are marked) and removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .prims import COUNTER, semisort_group


class ArboricityViolation(ValueError):
    """A peeling round removed nothing: the arboricity bound was wrong."""


@dataclass
class StaticResult:
    oriented: list[tuple[int, int]]
    rounds: int
    survivors: list[int] = field(default_factory=list)  # remaining edges before each round


def round_bound(m: int, eps: Fraction) -> int:
    if m == 0:
        return 0
    base = (2 + eps) / 2
    return math.ceil(math.log(2 * m) / math.log(base)) + 1


def static_orientation(edges: Sequence[tuple[int, int]], c: int, eps) -> StaticResult:
    """Orient `edges` (pairs in any direction); returns (tail, head) pairs."""
    eps = Fraction(eps)
    if not (0 < eps <= 2):
        raise ValueError("eps must lie in (0, 2]")
    limit = (2 + eps) * c
    cap = math.floor(limit)
    remaining = list(edges)
    oriented: list[tuple[int, int]] = []
    survivors: list[int] = []
    rounds = 0
    while remaining:
        survivors.append(len(remaining))
        rounds += 1
        pairs = [(a, b) for a, b in remaining] + [(b, a) for a, b in remaining]
        marked = set()
        for v, nbrs in semisort_group(pairs):
            if len(nbrs) <= cap:
                marked.add(v)
        rest = []
        for a, b in remaining:
            am = a in marked
            bm = b in marked
            if am and (not bm or a < b):
                oriented.append((a, b))
            elif bm:
                oriented.append((b, a))
            else:
                rest.append((a, b))
        COUNTER.add(len(remaining))
        if len(rest) == len(remaining):
            raise ArboricityViolation(
                f"no vertex of {len(remaining)} remaining edges has degree <= {limit}"
            )
        remaining = rest
    return StaticResult(oriented, rounds, survivors)
