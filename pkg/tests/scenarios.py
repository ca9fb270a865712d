"""Shared drivers for the algorithm tests.

Organic workloads keep the worst-case algorithms in their trivial branch
almost always, so the bounded branch is reached with a warm start: hubs
0..c-1 are preloaded with out-edges to shared leaves through the raw graph
API (bypassing the algorithm), giving the complete bipartite graph K_{c,m},
whose arboricity is at most c.  Every per-call property is stated for an
arbitrary starting state, so the preload is a legitimate start.
"""

from __future__ import annotations

import random

from batchorient.graph import Batch, canonical
from batchorient.verify import Verifier


def warm_hubs(orienter, hubs: int, leaves: int) -> int:
    """Preload hub -> leaf edges; returns the next unused leaf id."""
    G = orienter.graph
    G.insert_edges([(h, hubs + j) for j in range(leaves) for h in range(hubs)])
    return hubs + leaves


def hub_batches(n: int, hubs: int, start: int, steps: int, per_step: int, seed: int, delete_every: int = 0):
    """Batches that attach `per_step` fresh leaves to every hub; every
    `delete_every`-th batch instead removes the edges of a few random leaves."""
    rng = random.Random(seed)
    nxt = start
    live: list[int] = list(range(hubs, start))
    for t in range(steps):
        if delete_every and t % delete_every == delete_every - 1 and live:
            gone = rng.sample(live, min(per_step, len(live)))
            for leaf in gone:
                live.remove(leaf)
            yield Batch.delete([canonical(h, leaf) for leaf in gone for h in range(hubs)])
            continue
        if nxt + per_step > n:
            return
        fresh = list(range(nxt, nxt + per_step))
        nxt += per_step
        live += fresh
        yield Batch.insert([(h, leaf) for leaf in fresh for h in range(hubs)])


def run_verified(orienter, batches, reference: str = "static"):
    """Drive the orienter under a strict verifier; returns (verifier, reports)."""
    ver = Verifier(orienter.params, reference=reference, strict=True).attach(orienter.graph)
    reports = []
    for b in batches:
        ver.before_update(b)
        rep = orienter.update(b)
        ver.after_update(rep)
        reports.append(rep)
    return ver, reports
