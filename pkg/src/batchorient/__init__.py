"""Parallel batch-dynamic low out-degree orientation: bags and panniers,
roughly sorted lists, skylines, the amortized and worst-case update
algorithms, a verification harness and two applications."""

from .algo_amortized import AmortizedOrienter, AmortizedParams
from .algo_reinsertion import ReinsertionOrienter, ReinsertionParams
from .algo_twostage import TwoStageOrienter, WorstCaseParams
from .graph import Batch, BatchError, OrientedGraph
from .static_orient import static_orientation
from .workload import gen_workload, read_workload, write_workload

__all__ = [
    "AmortizedOrienter", "AmortizedParams", "Batch", "BatchError", "OrientedGraph",
    "ReinsertionOrienter", "ReinsertionParams", "TwoStageOrienter", "WorstCaseParams",
    "gen_workload", "read_workload", "static_orientation", "write_workload",
]
