"""Sequential stand-ins for the fork-join primitives.

Every primitive charges an element-touch counter so tests can bound work
without relying on wall-clock time.  A process-wide switch selects between
randomized semisorting (hash buckets, seeded group order) and a deterministic
merge sort, mirroring the randomized/deterministic bound pairs of the
algorithms built on top.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from typing import Any, Callable, Hashable, Iterable, Sequence, TypeVar

T = TypeVar("T")
K = TypeVar("K", bound=Hashable)


class TouchCounter:
    """Monotone element-touch counter shared by all instrumented code."""

    __slots__ = ("n",)

    def __init__(self) -> None:
        self.n = 0

    def add(self, k: int) -> None:
        self.n += k


class Config:
    __slots__ = ("deterministic", "rng", "seed")

    def __init__(self) -> None:
        self.deterministic = False
        self.seed = 0
        self.rng = random.Random(0)


COUNTER = TouchCounter()
CONFIG = Config()


def configure(*, deterministic: bool | None = None, seed: int | None = None) -> None:
    if deterministic is not None:
        CONFIG.deterministic = deterministic
    if seed is not None:
        CONFIG.seed = seed
        CONFIG.rng = random.Random(seed)


@contextmanager
def mode(*, deterministic: bool, seed: int = 0):
    """Temporarily switch the global primitive mode."""
    saved = (CONFIG.deterministic, CONFIG.seed, CONFIG.rng)
    configure(deterministic=deterministic, seed=seed)
    try:
        yield CONFIG
    finally:
        CONFIG.deterministic, CONFIG.seed, CONFIG.rng = saved


@contextmanager
def touches():
    """Yield a one-element list that receives the touches charged inside the block."""
    box = [0]
    start = COUNTER.n
    try:
        yield box
    finally:
        box[0] = COUNTER.n - start


@contextmanager
def uncharged():
    """Run a block without charging the touch counter (used by checkers)."""
    start = COUNTER.n
    try:
        yield
    finally:
        COUNTER.n = start


def scan(a: Sequence[T], op: Callable[[T, T], T], identity: T) -> tuple[list[T], T]:
    """Exclusive prefix sums and the total."""
    out = []
    acc = identity
    for x in a:
        out.append(acc)
        acc = op(acc, x)
    COUNTER.add(len(a))
    return out, acc


def reduce(a: Sequence[T], op: Callable[[T, T], T], identity: T) -> T:
    acc = identity
    for x in a:
        acc = op(acc, x)
    COUNTER.add(len(a))
    return acc


def map_(f: Callable[[T], Any], a: Sequence[T]) -> list:
    COUNTER.add(len(a))
    return [f(x) for x in a]


def filter_(pred: Callable[[T], bool], a: Sequence[T]) -> list[T]:
    COUNTER.add(len(a))
    return [x for x in a if pred(x)]


def stable_sort(a: Sequence[T], key: Callable[[T], Any] | None = None) -> list[T]:
    """Bottom-up merge sort; stable, and charges one touch per element per pass."""
    items = list(a)
    n = len(items)
    if n < 2:
        COUNTER.add(n)
        return items
    keys = [key(x) for x in items] if key is not None else items
    order = list(range(n))
    width = 1
    passes = 0
    while width < n:
        merged = []
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j = lo, mid
            while i < mid and j < hi:
                # <= keeps the left run first on ties, which is what makes it stable
                if keys[order[i]] <= keys[order[j]]:
                    merged.append(order[i])
                    i += 1
                else:
                    merged.append(order[j])
                    j += 1
            merged.extend(order[i:mid])
            merged.extend(order[j:hi])
        order = merged
        width *= 2
        passes += 1
    COUNTER.add(n * passes)
    return [items[i] for i in order]


def semisort_group(
    pairs: Iterable[tuple[K, Any]], seed: int | None = None
) -> list[tuple[K, list]]:
    """Group values by key.

    Randomized mode buckets with a dict and emits groups in a seeded random
    order; deterministic mode stable-sorts by key so groups come out key-sorted.
    Within a group, values keep their input order in both modes.
    """
    pairs = list(pairs)
    if CONFIG.deterministic:
        ordered = stable_sort(pairs, key=lambda kv: kv[0])
        groups: list[tuple[Any, list]] = []
        for k, v in ordered:
            if groups and groups[-1][0] == k:
                groups[-1][1].append(v)
            else:
                groups.append((k, [v]))
        return groups
    buckets: dict = {}
    for k, v in pairs:
        b = buckets.get(k)
        if b is None:
            buckets[k] = [v]
        else:
            b.append(v)
    COUNTER.add(len(pairs))
    groups = list(buckets.items())
    rng = random.Random(seed) if seed is not None else CONFIG.rng
    rng.shuffle(groups)
    return groups


def remove_duplicates(keys: Iterable[K], seed: int | None = None) -> list[K]:
    return [k for k, _ in semisort_group(((k, None) for k in keys), seed)]
