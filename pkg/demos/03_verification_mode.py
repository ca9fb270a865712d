"""
Verification mode
=================

The verifier prices every edge against a reference orientation and checks,
call by call, that the potential moves the way the analysis says it should.
Ordinary workloads rarely leave the trivial branch, so this demo starts from
two hubs that already own 1500 out-edges each.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from batchorient import TwoStageOrienter  # noqa: E402
from scenarios import hub_batches, run_verified, warm_hubs  # noqa: E402

o = TwoStageOrienter(2000, 2)
start = warm_hubs(o, 2, 1500)
print("start: max out-degree", o.graph.max_out_degree())

ver, reports = run_verified(o, hub_batches(2000, 2, start, 40, 4, seed=1, delete_every=5))
print("after 40 updates: max out-degree", o.graph.max_out_degree())

summary = ver.summary()
print("call classes:", summary["calls"])
for check, count in summary["passed"].items():
    print(f"  {check:20s} passed {count}")
print("failures:", summary["failures"])

# thresholds of the first bounded calls: the second skyline never sits more than c' above the first
bounded = [call for rep in reports for call in rep.calls if call.branch == "bounded"]
for call in bounded[:3]:
    print("bounded call thresholds", call.thresholds)
