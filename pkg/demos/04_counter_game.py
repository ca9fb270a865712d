"""
The counter game
================

n rational counters; a move with threshold T may lower counters above T
(never below T), must not increase the total, and may raise counters up to
T + H.  However the moves are chosen, no counter gets far above Y + H log n.
"""

from fractions import Fraction

import numpy as np

from batchorient.counter_game import (
    check_move, compress_dips, greedy_adversary, play_sequence, random_sequence,
)

# one legal move: 11 units leave the counters above 10, 10 arrive
u = [16, 12, 13, 5, 8, 2]
print("legal:", check_move(u, [10, 10, 10, 13, 10, 2], 10, 3))
print("R3 breach:", check_move(u, [10, 10, 10, 14, 9, 2], 10, 3))

# a random sequence, compressed to strictly increasing thresholds
rng = np.random.default_rng(0)
seq = random_sequence(64, 3, 1, 12, rng)
out = compress_dips(seq, 1)
print("thresholds", [str(m.T) for m in seq], "->", [str(m.T) for m in out])

# on a climbing sequence, the weight above the threshold halves every 2H of threshold growth
st = play_sequence(compress_dips(random_sequence(64, 3, 1, 40, rng, climb=True), 1), 1)
print("weights above threshold at milestones:", [str(st.weights_above[i]) for i in st.milestones])

# the greedy adversary against the bound
for n in (16, 256, 4096):
    stats = play_sequence(greedy_adversary(n, 3, 1, 300), 1)
    print(f"n={n:5d} max weight {float(stats.max_weight):5.2f}  Y + H log2 n = {3 + np.log2(n):5.2f}")
