"""Skew binary arithmetic and the tree-backed bag built on it.

A bag is a list of digits, front first.  Each digit of weight 2^(i+1)-1
owns a complete binary tree with exactly that many slots, so adding and
removing from the front of the skew number maps onto merging trees under a
new root and splitting a root off a tree.  Both are O(1) per digit, which is
where the constant work per element comes from.

The pannier pairs two bags: new edges go to the back, pops drain the front,
and when the front runs dry the back is promoted wholesale.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from .prims import COUNTER


class BagError(ValueError):
    """Raised on dead, foreign or duplicate handles and on underflow."""


# ---------------------------------------------------------------------------
# weight-level skew arithmetic


def is_skew_weight(w: int) -> bool:
    return w >= 1 and (w + 1) & w == 0


def is_valid_skew(weights: Sequence[int]) -> bool:
    """Weights of the form 2^(i+1)-1, nondecreasing, only the first two equal."""
    for i, w in enumerate(weights):
        if not is_skew_weight(w):
            return False
        if i > 0:
            prev = weights[i - 1]
            if w < prev or (w == prev and i != 1):
                return False
    return True


def skew_init(x: int) -> list[int]:
    """Greedy representation of x, front (smallest weight) first."""
    if x < 0:
        raise ValueError("skew_init of a negative value")
    out: list[int] = []
    i = (x - 1).bit_length() + 2 if x > 0 else 0
    while x > 0:
        w = (1 << i) - 1
        if 2 * w == x:
            out[:0] = [w, w]
            x = 0
        elif w <= x:
            out.insert(0, w)
            x -= w
        i -= 1
    return out


def skew_add(weights: Sequence[int], x: int) -> list[int]:
    if x < 0:
        raise ValueError("skew_add of a negative value")
    l = list(weights)
    if not l:
        return skew_init(x)
    while x >= l[0]:
        if len(l) > 1 and l[0] == l[1]:
            l[0:2] = [2 * l[0] + 1]
            x -= 1
        else:
            x -= l[0]
            l.insert(0, l[0])
    while x > 0 and len(l) > 1 and l[0] == l[1]:
        l[0:2] = [2 * l[0] + 1]
        x -= 1
    return skew_init(x) + l


def skew_subtract(weights: Sequence[int], x: int) -> list[int]:
    if x < 0 or x > sum(weights):
        raise BagError(f"cannot subtract {x} from a skew number of value {sum(weights)}")
    l = list(weights)
    while x > 0:
        w = l[0]
        if x >= w:
            l.pop(0)
            x -= w
        else:
            half = (w - 1) // 2
            l[0:1] = [half, half]
            x -= 1
    return l


# ---------------------------------------------------------------------------
# tree-backed bag


class Handle:
    """Stable reference to one stored element.

    Hole-filling during deletes moves elements between slots; the handle
    follows its element, so it stays valid until that element leaves the bag.
    """

    __slots__ = ("item", "_node", "_bag", "_mark")

    def __init__(self, item: Any, bag: "Bag") -> None:
        self.item = item
        self._node: _Node | None = None
        self._bag = bag
        self._mark = False

    @property
    def alive(self) -> bool:
        return self._node is not None

    @property
    def bag(self) -> "Bag | None":
        return self._bag if self._node is not None else None

    def get(self) -> Any:
        if self._node is None:
            raise BagError(f"dead handle for {self.item!r}")
        return self.item

    def __repr__(self) -> str:
        return f"Handle({self.item!r}, {'live' if self.alive else 'dead'})"


class _Node:
    __slots__ = ("h", "left", "right")

    def __init__(self) -> None:
        self.h: Handle = None  # type: ignore[assignment]
        self.left: _Node | None = None
        self.right: _Node | None = None


def _fill(node: _Node, hs: list[Handle], start: int, w: int) -> None:
    # preorder layout: slot `start` is the root, then the left half, then the right half
    stack = [(node, start, w)]
    while stack:
        nd, s, size = stack.pop()
        h = hs[s]
        nd.h = h
        h._node = nd
        if size > 1:
            half = (size - 1) >> 1
            nd.left = _Node()
            nd.right = _Node()
            stack.append((nd.right, s + 1 + half, half))
            stack.append((nd.left, s + 1, half))


def _preorder(node: _Node, out: list[Handle]) -> None:
    stack = [node]
    while stack:
        nd = stack.pop()
        out.append(nd.h)
        if nd.left is not None:
            stack.append(nd.right)
            stack.append(nd.left)


class Bag:
    """Unordered container with batch insert, delete-by-handle, peek and pop.

    ``peek(k)`` returns exactly the elements ``pop(k)`` would remove, in the
    same order, and touches O(k + log size) slots.
    """

    __slots__ = ("_digits", "_size")

    def __init__(self, items: Iterable[Any] = ()) -> None:
        self._digits: list[list] = []  # [weight, root], front first
        self._size = 0
        items = list(items)
        if items:
            self.batch_insert(items)

    def __len__(self) -> int:
        return self._size

    def weights(self) -> list[int]:
        return [d[0] for d in self._digits]

    # -- insert ---------------------------------------------------------

    def batch_insert(self, items: Sequence[Any]) -> list[Handle]:
        hs = [Handle(it, self) for it in items]
        x = len(hs)
        if x == 0:
            return hs
        COUNTER.add(x)
        digits = self._digits
        pending: list[tuple[_Node, int, int]] = []
        pos = 0

        def fresh(w: int) -> _Node:
            # the root exists now so merges can hang it; its slots are filled at the end
            nonlocal pos
            nd = _Node()
            pending.append((nd, pos, w))
            pos += w
            return nd

        def merge() -> None:
            nonlocal pos
            w = digits[0][0]
            root = _Node()
            h = hs[pos]
            pos += 1
            root.h = h
            h._node = root
            root.left = digits[0][1]
            root.right = digits[1][1]
            digits[0:2] = [[2 * w + 1, root]]

        if digits:
            while x >= digits[0][0]:
                w1 = digits[0][0]
                if len(digits) > 1 and digits[1][0] == w1:
                    merge()
                    x -= 1
                else:
                    digits.insert(0, [w1, fresh(w1)])
                    x -= w1
            while x > 0 and len(digits) > 1 and digits[0][0] == digits[1][0]:
                merge()
                x -= 1
        head = [[w, fresh(w)] for w in skew_init(x)]
        self._digits = head + digits
        for nd, start, w in pending:
            _fill(nd, hs, start, w)
        self._size += len(hs)
        return hs

    # -- front removal ------------------------------------------------------

    def _plan(self, k: int) -> tuple[list[tuple[_Node, bool]], list[tuple[int, _Node]], int]:
        """Simulate subtracting k from the front.

        Returns the removed pieces (whole subtrees or lone roots), the split
        remainders still at the front (front last), and how many original
        digits were consumed.
        """
        if k > self._size:
            raise BagError(f"cannot remove {k} elements from a bag of size {self._size}")
        digits = self._digits
        taken: list[tuple[_Node, bool]] = []
        stack: list[tuple[int, _Node]] = []
        i = 0
        x = k
        steps = 0
        while x > 0:
            if stack:
                w, nd = stack.pop()
            else:
                w, nd = digits[i]
                i += 1
            steps += 1
            if x >= w:
                taken.append((nd, True))
                x -= w
            else:
                taken.append((nd, False))
                x -= 1
                half = (w - 1) >> 1
                stack.append((half, nd.right))
                stack.append((half, nd.left))
        COUNTER.add(k + steps)
        return taken, stack, i

    @staticmethod
    def _expand(taken: list[tuple[_Node, bool]]) -> list[Handle]:
        out: list[Handle] = []
        for nd, whole in taken:
            if whole:
                _preorder(nd, out)
            else:
                out.append(nd.h)
        return out

    def _remove_front(self, k: int) -> list[Handle]:
        taken, stack, i = self._plan(k)
        out = self._expand(taken)
        for h in out:
            h._node = None
        self._digits = [[w, nd] for w, nd in reversed(stack)] + self._digits[i:]
        self._size -= k
        return out

    def peek(self, k: int) -> list[Any]:
        k = min(k, self._size)
        if k <= 0:
            return []
        taken, _, _ = self._plan(k)
        return [h.item for h in self._expand(taken)]

    def pop(self, k: int) -> list[Any]:
        if k < 0:
            raise BagError("negative pop")
        if k == 0:
            return []
        return [h.item for h in self._remove_front(k)]

    # -- delete by handle ---------------------------------------------------

    def batch_delete(self, handles: Sequence[Handle]) -> list[Any]:
        k = len(handles)
        if k == 0:
            return []
        try:
            for h in handles:
                if h._node is None:
                    raise BagError(f"dead handle for {h.item!r}")
                if h._bag is not self:
                    raise BagError(f"handle for {h.item!r} belongs to another bag")
                if h._mark:
                    raise BagError(f"duplicate handle for {h.item!r}")
                h._mark = True
            removed = self._remove_front(k)
            survivors = [h for h in removed if not h._mark]
            holes = [h for h in handles if h._node is not None]
            # the front removal took exactly as many survivors as there are
            # doomed elements still sitting in the trees
            for s, h in zip(survivors, holes):
                nd = h._node
                nd.h = s
                s._node = nd
                h._node = None
            COUNTER.add(len(survivors) + k)
        finally:
            for h in handles:
                h._mark = False
        return [h.item for h in handles]

    # -- diagnostics (not charged) --------------------------------------------

    def items(self) -> list[Any]:
        return [h.item for h in self.handles()]

    def handles(self) -> list[Handle]:
        out: list[Handle] = []
        for _, nd in self._digits:
            _preorder(nd, out)
        return out

    def check(self) -> None:
        """Raise AssertionError unless every structural invariant holds."""
        ws = self.weights()
        assert is_valid_skew(ws), ws
        assert sum(ws) == self._size, (ws, self._size)
        for w, root in self._digits:
            stack = [(root, w)]
            while stack:
                nd, size = stack.pop()
                assert nd.h._node is nd and nd.h._bag is self
                if size == 1:
                    assert nd.left is None and nd.right is None
                else:
                    half = (size - 1) >> 1
                    stack.append((nd.left, half))
                    stack.append((nd.right, half))


class Pannier:
    """Front bag plus back bag; pops exhaust the front before touching the back."""

    __slots__ = ("front", "back")

    def __init__(self) -> None:
        self.front = Bag()
        self.back = Bag()

    def __len__(self) -> int:
        return len(self.front) + len(self.back)

    def insert_back(self, items: Sequence[Any]) -> list[Handle]:
        return self.back.batch_insert(items)

    def insert_front(self, items: Sequence[Any]) -> list[Handle]:
        return self.front.batch_insert(items)

    def peek(self, k: int) -> list[Any]:
        out = self.front.peek(k)
        if len(out) < k:
            out += self.back.peek(k - len(out))
        return out

    def pop(self, k: int, on_promote: Callable[["Pannier", str], None] | None = None) -> list[Any]:
        nf = len(self.front)
        if k <= nf:
            return self.front.pop(k)
        if k > nf + len(self.back):
            raise BagError(f"cannot pop {k} elements from a pannier of size {len(self)}")
        out = self.front.pop(nf)
        if on_promote is not None:
            on_promote(self, "before")
        # the emptied front is recycled as the new back
        self.front, self.back = self.back, self.front
        if on_promote is not None:
            on_promote(self, "after")
        out += self.front.pop(k - nf)
        return out

    def items(self) -> list[Any]:
        return self.front.items() + self.back.items()
