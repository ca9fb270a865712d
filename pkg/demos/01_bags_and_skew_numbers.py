"""
Bags on skew binary numbers
===========================

A bag's size is written in skew binary: digits of weight 2^k - 1, at most
one repeated digit, smallest first.  Each digit owns a complete tree, so
batch insert, pop and delete-by-handle touch O(k + log size) slots.
"""

from batchorient import prims
from batchorient.skewbag import Bag, Pannier, skew_add, skew_init, skew_subtract

# the representation of 10 is 3 + 7; adding 1 merges the two 1s of 2 into a 3
print("skew(10) =", skew_init(10))
print("skew(2) + 1 =", skew_add(skew_init(2), 1))
print("skew(10) - 4 =", skew_subtract(skew_init(10), 4))

# a bag of 1000 items; peek previews exactly what pop would remove
bag = Bag(range(1000))
print("digits:", bag.weights())
with prims.touches() as t:
    preview = bag.peek(5)
print("peek(5) =", preview, "touching", t[0], "slots")
assert bag.pop(5) == preview

# delete by handle fills the holes from the front, so handles stay valid
handles = bag.batch_insert(["x", "y", "z"])
print("deleted", bag.batch_delete(handles[:2]), "size now", len(bag))

# a pannier drains its front bag first, then promotes the back bag wholesale
p = Pannier()
p.insert_front(["old-1", "old-2"])
p.insert_back(["new-1", "new-2", "new-3"])
print("pannier pop(3):", p.pop(3, on_promote=lambda q, phase: print("  promotion", phase)))
