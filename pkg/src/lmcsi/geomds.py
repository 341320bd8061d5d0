"""Vertical ray shooting among horizontal segments, and a Pareto staircase.

Ray shooting uses a segment tree over "slots" of the x axis: every distinct
endpoint coordinate gets a slot for the point itself and one for the open
gap after it, so open and closed endpoints are told apart exactly.  A
segment is stored in the O(log n) canonical nodes covering its slot range.
Segments are renumbered by ``(y, tag)`` order, so each node's list is
sorted by construction and a query is one binary search per node on the
root-to-leaf path.  Deleted entries are skipped with path-compressed
"next alive" pointers.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Any

import numpy as np

from ._kernels import forest_build, forest_shoot
from .core import LmcsiError


class UnknownHandle(LmcsiError, KeyError):
    pass


@dataclass(frozen=True)
class HSegment:
    y: Any
    x_lo: Any
    x_hi: Any
    lo_open: bool = False
    hi_open: bool = False
    tag: Any = None

    def covers(self, x) -> bool:
        if x < self.x_lo or x > self.x_hi:
            return False
        if x == self.x_lo and self.lo_open:
            return False
        if x == self.x_hi and self.hi_open:
            return False
        return True


def slot_map(coords, x):
    """Slot index of ``x`` given the sorted distinct endpoint coordinates."""
    r = bisect.bisect_left(coords, x)
    if r < len(coords) and coords[r] == x:
        return 2 * r + 1
    return 2 * r


def segment_slots(coords, x_lo, lo_open, x_hi, hi_open):
    lo = 2 * bisect.bisect_left(coords, x_lo) + 1 + (1 if lo_open else 0)
    hi = 2 * bisect.bisect_left(coords, x_hi) + 1 - (1 if hi_open else 0)
    return lo, hi


# ---------------------------------------------------------------------------
# Public structures.


def _order_key(seg):
    return (seg.y, (seg.tag is None, seg.tag))


class RayShootIndex:
    """Static ray-shooting index.  Use :func:`shoot_up` to query."""

    def __init__(self, segments=()):
        segs = [s for s in segments if s.x_lo <= s.x_hi]
        segs.sort(key=_order_key)
        self.segments = segs
        self._ys = [s.y for s in segs]
        coords = sorted({s.x_lo for s in segs} | {s.x_hi for s in segs})
        self._coords = coords
        lo = np.empty(len(segs), np.int64)
        hi = np.empty(len(segs), np.int64)
        for t, s in enumerate(segs):
            lo[t], hi[t] = segment_slots(coords, s.x_lo, s.lo_open, s.x_hi, s.hi_open)
        keep = lo <= hi  # e.g. an open degenerate segment covers nothing
        lo = np.where(keep, lo, 0)
        hi = np.where(keep, hi, -1)
        self._forest = forest_build(lo, hi, 2 * len(coords) + 1)
        self._dead = np.zeros(len(segs), np.bool_)

    def shoot_up(self, x, y0):
        """Lowest segment strictly above ``y0`` containing ``x``, or None."""
        if not self.segments:
            return None
        rank = bisect.bisect_right(self._ys, y0)
        if rank >= len(self.segments):
            return None
        slot = slot_map(self._coords, x)
        hit = forest_shoot(*self._forest, self._dead, slot, rank)
        return None if hit < 0 else self.segments[hit]


def build_ray_index(segments) -> RayShootIndex:
    return RayShootIndex(segments)


def shoot_up(index: RayShootIndex, x, y0):
    return index.shoot_up(x, y0)


class DynRayShootIndex:
    """Ray shooting with insertions and deletions by handle.

    Nodes of a segment tree over the known endpoint coordinates keep sorted
    lists of ``(y, tag-key, handle)``.  Segments whose endpoints are not yet
    known wait in a small side list that queries scan directly; once it grows
    past a fraction of the live set the tree is rebuilt over the enlarged
    coordinate set, which keeps the amortized update cost polylogarithmic.
    """

    def __init__(self, segments=(), universe=()):
        self._live = {}
        self._next = 0
        self._coords = sorted(set(universe))
        self._pending = set()
        self._placed = {}
        self._reset_tree()
        for s in segments:
            self.insert(s)

    def _reset_tree(self):
        self._size = 1
        while self._size < 2 * len(self._coords) + 1:
            self._size *= 2
        self._nodes = [[] for _ in range(2 * self._size)]
        self._placed = {}

    def _nodes_for(self, lo, hi):
        lo += self._size
        hi += self._size + 1
        out = []
        while lo < hi:
            if lo & 1:
                out.append(lo)
                lo += 1
            if hi & 1:
                hi -= 1
                out.append(hi)
            lo >>= 1
            hi >>= 1
        return out

    def _place(self, handle, seg):
        lo, hi = segment_slots(self._coords, seg.x_lo, seg.lo_open, seg.x_hi, seg.hi_open)
        nodes = self._nodes_for(lo, hi) if lo <= hi else []
        item = (seg.y, (seg.tag is None, seg.tag), handle)
        for v in nodes:
            bisect.insort(self._nodes[v], item)
        self._placed[handle] = (nodes, item)

    def _known(self, x):
        r = bisect.bisect_left(self._coords, x)
        return r < len(self._coords) and self._coords[r] == x

    def _rebuild(self):
        coords = set(self._coords)
        for s in self._live.values():
            coords.add(s.x_lo)
            coords.add(s.x_hi)
        self._coords = sorted(coords)
        self._reset_tree()
        self._pending = set()
        for h, s in self._live.items():
            self._place(h, s)

    def insert(self, seg: HSegment) -> int:
        handle = self._next
        self._next += 1
        self._live[handle] = seg
        if self._known(seg.x_lo) and self._known(seg.x_hi):
            self._place(handle, seg)
        else:
            self._pending.add(handle)
            if len(self._pending) > 16 + len(self._live) // 16:
                self._rebuild()
        return handle

    def delete(self, handle: int):
        if handle not in self._live:
            raise UnknownHandle(handle)
        del self._live[handle]
        if handle in self._pending:
            self._pending.discard(handle)
            return
        nodes, item = self._placed.pop(handle)
        for v in nodes:
            lst = self._nodes[v]
            del lst[bisect.bisect_left(lst, item)]

    def __len__(self):
        return len(self._live)

    def shoot_up(self, x, y0):
        best = None
        for h in self._pending:
            s = self._live[h]
            if s.y > y0 and s.covers(x):
                key = (s.y, (s.tag is None, s.tag), h)
                if best is None or key < best:
                    best = key
        v = slot_map(self._coords, x) + self._size
        while v >= 1:
            lst = self._nodes[v]
            # First item with y > y0: compare against a key above every
            # tag sharing that y.
            r = bisect.bisect_right(lst, (y0, (True, None), float("inf")))
            while r < len(lst) and lst[r][0] <= y0:
                r += 1
            if r < len(lst) and (best is None or lst[r] < best):
                best = lst[r]
            v >>= 1
        return None if best is None else self._live[best[2]]


def dyn_insert(index: DynRayShootIndex, seg: HSegment) -> int:
    return index.insert(seg)


def dyn_delete(index: DynRayShootIndex, handle: int):
    index.delete(handle)


def dyn_shoot_up(index: DynRayShootIndex, x, y0):
    return index.shoot_up(x, y0)


class ParetoStaircase:
    """Maximal points of an inserted set, for 2-sided dominance queries.

    Points are kept sorted by x with y strictly decreasing, so the first
    stored point with x >= a has the largest y among all such points.
    """

    def __init__(self):
        self._xs = []
        self._ys = []
        self._data = []

    def __len__(self):
        return len(self._xs)

    def points(self):
        return list(zip(self._xs, self._ys))

    def insert(self, x, y, payload=None):
        i = bisect.bisect_left(self._xs, x)
        if i < len(self._xs) and self._ys[i] >= y:
            return False  # dominated by a stored point
        j = i
        while j > 0 and self._ys[j - 1] <= y:
            j -= 1
        end = i + 1 if i < len(self._xs) and self._xs[i] == x else i
        self._xs[j:end] = [x]
        self._ys[j:end] = [y]
        self._data[j:end] = [payload]
        return True

    def find_dominating(self, a, b):
        """Payload of some point with x >= a and y >= b, or None."""
        i = bisect.bisect_left(self._xs, a)
        if i < len(self._xs) and self._ys[i] >= b:
            return self._data[i]
        return None

    def dominates(self, a, b) -> bool:
        i = bisect.bisect_left(self._xs, a)
        return i < len(self._xs) and self._ys[i] >= b


def staircase_insert(s: ParetoStaircase, point, payload=None):
    return s.insert(point[0], point[1], payload)


def staircase_dominates(s: ParetoStaircase, a, b) -> bool:
    return s.dominates(a, b)
