"""Report records shared by the three update algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CallRecord:
    """One invocation of a worst-case update routine (one recursion level)."""

    depth: int
    batch_size: int
    x: int
    thresholds: list[int] = field(default_factory=list)
    branch: str = "empty"  # "empty", "trivial" or "bounded"
    flips: int = 0
    removed: int = 0


@dataclass
class UpdateReport:
    algorithm: str
    kind: str
    batch_size: int
    flips: int = 0
    edges_to_static: int = 0
    max_outdegree: int = 0
    recursion_depth: int = 0
    calls: list[CallRecord] = field(default_factory=list)

    @property
    def threshold_min(self) -> int | None:
        ts = [t for c in self.calls for t in c.thresholds]
        return min(ts) if ts else None


class Orienter:
    """Owns an OrientedGraph and applies batches to it with one algorithm."""

    name = "base"

    def __init__(self, graph) -> None:
        self.graph = graph

    def update(self, batch) -> UpdateReport:  # pragma: no cover - interface
        raise NotImplementedError
