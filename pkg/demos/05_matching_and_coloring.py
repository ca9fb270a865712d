"""
Applications: maximal matching and palette coloring
===================================================

A low out-degree orientation lets each vertex watch only its out-neighbors.
The matching keeps, per vertex, the set of unmatched in-neighbors; the
coloring picks a palette color absent from every out-neighbor's palette.
"""

from batchorient import AmortizedOrienter
from batchorient.apps import AppRunner, PaletteExhausted
from batchorient.workload import gen_workload

w = gen_workload("k-forest-union", 5000, 3, 20, 200, seed=4)
run = AppRunner(AmortizedOrienter(w.n, w.c), K_pal=8, seed=0)
for i, wb in enumerate(w.batches):
    _, md, moved = run.update(wb.to_batch())
    assert run.check() == []
    if i % 5 == 0:
        matched = sum(m is not None for m in run.matching.mate) // 2
        print(f"batch {i:2d}: {matched} matched pairs, {len(moved)} vertices recolored")

# with c = 1 each palette holds about half of 104 colors, and a handful of
# out-neighbors already covers nearly all of them
w1 = gen_workload("forest-stars", 5000, 1, 20, 200, seed=4)
run1 = AppRunner(AmortizedOrienter(w1.n, 1), K_pal=8, seed=0)
try:
    for wb in w1.batches:
        run1.update(wb.to_batch())
    print("c=1: no exhaustion on this seed")
except PaletteExhausted as e:
    print("c=1:", e)
