"""Workload generation and the line-based workload file format.

    H n=<int> c=<int> seed=<int>
    B <k>
    + u v [forest]
    - u v

Every insert line may carry the index of the forest the edge belongs to;
the generators always write it, so each prefix of a workload comes with a
certificate that its edge set splits into at most c forests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import IO, Iterable

from .graph import Batch, canonical

KINDS = ("forest-stars", "k-forest-union", "sliding-window", "adversarial-hub")


class WorkloadError(ValueError):
    pass


@dataclass
class WorkBatch:
    kind: str
    edges: list[tuple[int, int]]
    forests: list[int] | None = None

    def to_batch(self) -> Batch:
        return Batch(self.kind, list(self.edges))


@dataclass
class Workload:
    n: int
    c: int
    seed: int
    batches: list[WorkBatch] = field(default_factory=list)


# -- file format -------------------------------------------------------------


def write_workload(w: Workload, out: IO[str]) -> None:
    out.write(f"H n={w.n} c={w.c} seed={w.seed}\n")
    for b in w.batches:
        out.write(f"B {len(b.edges)}\n")
        sign = "+" if b.kind == "insert" else "-"
        for i, (u, v) in enumerate(b.edges):
            if b.forests is not None and b.kind == "insert":
                out.write(f"{sign} {u} {v} {b.forests[i]}\n")
            else:
                out.write(f"{sign} {u} {v}\n")


def dumps(w: Workload) -> str:
    import io

    buf = io.StringIO()
    write_workload(w, buf)
    return buf.getvalue()


def read_workload(lines: Iterable[str]) -> Workload:
    it = (ln.strip() for ln in lines)
    it = (ln for ln in it if ln and not ln.startswith("#"))
    try:
        head = next(it)
    except StopIteration:
        raise WorkloadError("empty workload file") from None
    parts = head.split()
    if parts[0] != "H":
        raise WorkloadError(f"expected header line, got {head!r}")
    try:
        kv = dict(p.split("=", 1) for p in parts[1:])
        w = Workload(int(kv["n"]), int(kv["c"]), int(kv.get("seed", 0)))
    except (KeyError, ValueError) as e:
        raise WorkloadError(f"bad header {head!r}") from e
    pending = 0
    cur: WorkBatch | None = None
    for ln in it:
        parts = ln.split()
        if parts[0] == "B":
            if pending:
                raise WorkloadError(f"batch ended {pending} lines early")
            pending = int(parts[1])
            cur = None
            if pending == 0:
                w.batches.append(WorkBatch("insert", []))
            continue
        if parts[0] not in "+-" or len(parts) not in (3, 4) or pending == 0:
            raise WorkloadError(f"unexpected line {ln!r}")
        kind = "insert" if parts[0] == "+" else "delete"
        if cur is None:
            cur = WorkBatch(kind, [], [] if len(parts) == 4 else None)
            w.batches.append(cur)
        elif cur.kind != kind:
            raise WorkloadError("a batch mixes insertions and deletions")
        u, v = int(parts[1]), int(parts[2])
        if not (0 <= u < w.n and 0 <= v < w.n):
            raise WorkloadError(f"vertex out of range in {ln!r}")
        cur.edges.append((u, v))
        if cur.forests is not None:
            cur.forests.append(int(parts[3]) if len(parts) == 4 else -1)
        pending -= 1
    if pending:
        raise WorkloadError("file ended inside a batch")
    return w


# -- generators --------------------------------------------------------------


class _ParentForests:
    """c forests given by parent pointers that always point to a lower rank,
    so every subset of the slots is acyclic within its forest."""

    def __init__(self, n: int, c: int, rng: random.Random, hubby: bool) -> None:
        self.n, self.c, self.rng, self.hubby = n, c, rng, hubby
        self.order = []
        self.rank = []
        for _ in range(c):
            perm = list(range(n))
            rng.shuffle(perm)
            r = [0] * n
            for i, v in enumerate(perm):
                r[v] = i
            self.order.append(perm)
            self.rank.append(r)
        self.active: dict[tuple[int, int], tuple[int, int]] = {}  # edge -> (forest, child)
        self.busy: set[tuple[int, int]] = set()  # (forest, child) slots in use

    def draw(self, taken: set) -> tuple[tuple[int, int], int, int] | None:
        rng = self.rng
        for _ in range(50):
            f = rng.randrange(self.c)
            v = rng.randrange(self.n)
            r = self.rank[f][v]
            if r == 0 or (f, v) in self.busy:
                continue
            j = rng.randrange(r)
            if self.hubby and rng.random() < 0.5:
                j = min(j, rng.randrange(r), rng.randrange(r))
            p = self.order[f][j]
            e = canonical(v, p)
            if e in self.active or e in taken:
                continue
            return e, f, v
        return None

    def insert_batch(self, k: int) -> WorkBatch:
        taken: dict = {}
        for _ in range(k):
            got = self.draw(taken)
            if got is None:
                break
            e, f, v = got
            taken[e] = (f, v)
            self.busy.add((f, v))
        self.active.update(taken)
        return WorkBatch("insert", list(taken), [fv[0] for fv in taken.values()])

    def delete(self, edges: list[tuple[int, int]]) -> WorkBatch:
        for e in edges:
            self.busy.discard(self.active.pop(e))
        return WorkBatch("delete", edges)


def _forest_stars(n, c, batches, size, rng) -> list[WorkBatch]:
    deg = [0] * n
    planned = [False] * n
    out: list[WorkBatch] = []
    to_insert: list[tuple[int, int]] = []
    live: list[tuple[int, int]] = []
    retiring: list[tuple[int, int]] = []

    def new_phase() -> list[tuple[int, int]]:
        pool = [v for v in range(n) if deg[v] == 0 and not planned[v]]
        rng.shuffle(pool)
        pool = pool[: max(2, min(len(pool), 4 * size))]
        edges = []
        centers = []
        i = 0
        while i + 1 < len(pool):
            grp = pool[i : i + rng.randint(3, 40)]
            i += len(grp)
            if len(grp) < 2:
                break
            center = min(grp)  # the lower id is the default tail
            edges += [(center, leaf) for leaf in grp if leaf != center]
            centers.append(center)
        edges += list(zip(centers, centers[1:]))  # join the stars into one caterpillar
        for u, v in edges:
            planned[u] = planned[v] = True
        rng.shuffle(edges)
        return edges

    while len(out) < batches:
        if not to_insert:
            retiring += live
            live = []
            to_insert = new_phase()
        if to_insert and (not retiring or rng.random() < 0.6):
            chunk, to_insert = to_insert[:size], to_insert[size:]
            for u, v in chunk:
                deg[u] += 1
                deg[v] += 1
            live += chunk
            out.append(WorkBatch("insert", chunk, [0] * len(chunk)))
        elif retiring:
            rng.shuffle(retiring)
            chunk, retiring = retiring[:size], retiring[size:]
            for u, v in chunk:
                deg[u] -= 1
                deg[v] -= 1
                if deg[u] == 0:
                    planned[u] = False
                if deg[v] == 0:
                    planned[v] = False
            out.append(WorkBatch("delete", chunk))
        else:
            break
    return out


def _k_forest_union(n, c, batches, size, rng, hubby=True) -> list[WorkBatch]:
    pf = _ParentForests(n, c, rng, hubby)
    target = int(0.7 * c * n)
    out = []
    while len(out) < batches:
        p_ins = 0.7 if len(pf.active) < target else 0.3
        if len(pf.active) < size or rng.random() < p_ins:
            b = pf.insert_batch(size)
            if not b.edges:
                b = pf.delete(rng.sample(list(pf.active), min(size, len(pf.active))))
        else:
            b = pf.delete(rng.sample(list(pf.active), size))
        out.append(b)
    return out


def _sliding_window(n, c, batches, size, rng, window=8) -> list[WorkBatch]:
    pf = _ParentForests(n, c, rng, hubby=False)
    out = []
    history: list[list[tuple[int, int]]] = []
    while len(out) < batches:
        if len(history) >= window:
            old = history.pop(0)
            if old:
                out.append(pf.delete(old))
                continue
        b = pf.insert_batch(size)
        history.append(list(b.edges))
        out.append(b)
    return out[:batches]


def _adversarial_hub(n, c, batches, size, rng) -> list[WorkBatch]:
    """Hubs 0..h-1 join every other vertex through one star-forest each, so
    lower-id orientation piles every hub edge onto the hubs; with c >= 2 the
    last forest is a random parent forest among the non-hubs."""
    hubs = max(1, c - 1) if c >= 2 else 1
    pf = _ParentForests(n, 1, rng, hubby=True) if c >= 2 else None
    free = {h: [v for v in range(hubs, n)] for h in range(hubs)}
    for h in free:
        rng.shuffle(free[h])
    live: dict[tuple[int, int], int] = {}
    out = []
    while len(out) < batches:
        if len(live) < size or rng.random() < 0.65:
            edges, forests = [], []
            for _ in range(size):
                h = rng.randrange(hubs)
                if pf is not None and rng.random() < 0.25:
                    got = pf.draw(set(edges))
                    if got is None or got[0][0] < hubs:
                        continue
                    e, _, v = got
                    pf.busy.add((0, v))
                    pf.active[e] = (0, v)
                    edges.append(e)
                    forests.append(hubs)
                    live[e] = -1
                    continue
                if free[h]:
                    v = free[h].pop()
                    e = (h, v)
                    if e in live or e in edges:
                        continue
                    edges.append(e)
                    forests.append(h)
                    live[e] = h
            out.append(WorkBatch("insert", edges, forests))
        else:
            chosen = rng.sample(list(live), min(size, len(live)))
            for e in chosen:
                h = live.pop(e)
                if h < 0:
                    pf.busy.discard(pf.active.pop(e))
                else:
                    free[h].insert(rng.randrange(len(free[h]) + 1), e[1])
            out.append(WorkBatch("delete", chosen))
    return out


def gen_workload(kind: str, n: int, c: int, batches: int, batch_size: int, seed: int) -> Workload:
    if kind not in KINDS:
        raise WorkloadError(f"unknown workload kind {kind!r}")
    if n < 4 or c < 1 or batches < 0 or batch_size < 1:
        raise WorkloadError("need n >= 4, c >= 1, batches >= 0, batch_size >= 1")
    if kind == "forest-stars" and c != 1:
        raise WorkloadError("forest-stars is a single-forest workload; use c=1")
    rng = random.Random(seed)
    if kind == "forest-stars":
        bs = _forest_stars(n, c, batches, batch_size, rng)
    elif kind == "k-forest-union":
        bs = _k_forest_union(n, c, batches, batch_size, rng)
    elif kind == "sliding-window":
        bs = _sliding_window(n, c, batches, batch_size, rng)
    else:
        bs = _adversarial_hub(n, c, batches, batch_size, rng)
    bs = [b for b in bs if b.edges]
    return Workload(n, c, seed, bs)
