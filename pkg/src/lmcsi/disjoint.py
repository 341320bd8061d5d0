"""Linear-order solvers: pairwise-disjoint and semi-disjoint instances.

When no two intervals overlap, representatives appear in the same order as
their intervals, so every color-spanning window of a realization is one of
the index windows found by :func:`minimal_csis`.  Windows that share a
boundary segment are linked into chains; each chain is an independent
"spread points as evenly as possible" problem over its boundary segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import (ColoredInterval, Instance, LmcsiError, MissingColor,
                   Realization, SolveResult)

#: Spacing reported for a single segment: no consecutive pair constrains it.
UNBOUNDED = math.inf


class EmptyList(LmcsiError):
    pass


class NotSemiDisjoint(LmcsiError):
    pass


class CombinatorialMCSI(NamedTuple):
    first: int
    last: int


@dataclass(frozen=True)
class Chain:
    windows: tuple
    boundary: tuple  # sorted indices of the segments that bound some window


def _check_colors(colors, k):
    missing = set(range(k)) - set(colors)
    if missing:
        raise MissingColor(f"colors {sorted(missing)} have no interval")


def _minimal_windows(colors: Sequence[int], k: int) -> list:
    counts = [0] * k
    missing = k
    out = []
    hi = -1
    n = len(colors)
    for lo in range(n):
        while missing and hi + 1 < n:
            hi += 1
            if counts[colors[hi]] == 0:
                missing -= 1
            counts[colors[hi]] += 1
        if missing:
            break
        # [lo, hi] is the shortest covering window starting at lo; it is
        # minimal iff dropping lo loses a color.
        c = colors[lo]
        if counts[c] == 1:
            out.append(CombinatorialMCSI(lo, hi))
            missing += 1
        counts[c] -= 1
    return out


def minimal_csis(instance: Instance) -> list:
    """All minimal color-spanning index windows, sorted by first index."""
    _check_colors(instance.colors, instance.k)
    return _minimal_windows(instance.colors, instance.k)


def build_chains(mcsis: Sequence[CombinatorialMCSI]) -> list:
    """Link windows whose last segment starts another window."""
    starting_at = {w.first: t for t, w in enumerate(mcsis)}
    used = [False] * len(mcsis)
    chains = []
    owner = {}
    for t in range(len(mcsis)):
        if used[t]:
            continue
        run = []
        cur = t
        while cur is not None:
            assert not used[cur], "window reached from two chains"
            used[cur] = True
            run.append(mcsis[cur])
            cur = starting_at.get(mcsis[cur].last)
        boundary = sorted({run[0].first} | {w.last for w in run})
        for s in boundary:
            assert owner.setdefault(s, len(chains)) == len(chains), \
                f"segment {s} bounds windows of two chains"
        chains.append(Chain(tuple(run), tuple(boundary)))
    return chains


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def ordered_dispersion(segments: Sequence) -> tuple:
    """Maximize the smallest gap between consecutive points, one per segment.

    ``segments`` are ``(left, right)`` pairs whose points must appear in the
    given order.  Spacing ``g`` is achievable iff ``left_a + (i-a)*g <=
    right_i`` for all ``a < i``, so the optimum is the smallest slope from a
    point ``(a, left_a)`` to a later point ``(i, right_i)``.  Those slopes are
    read off the upper hull of the left points with a binary search per
    ``i``.  Returns the optimum and the greedy placement realizing it.
    """
    if not segments:
        raise EmptyList("no segments")
    segs = [(Fraction(a), Fraction(b)) for a, b in segments]
    if len(segs) == 1:
        return UNBOUNDED, [segs[0][0]]

    hull = []
    best = None
    for i, (left, right) in enumerate(segs):
        if hull:
            p = (i, right)

            def slope(h):
                return (p[1] - h[1]) / (p[0] - h[0])

            lo, hi = 0, len(hull) - 1
            while lo < hi:  # slopes to p fall, then rise, along the hull
                mid = (lo + hi) // 2
                if slope(hull[mid + 1]) < slope(hull[mid]):
                    lo = mid + 1
                else:
                    hi = mid
            s = slope(hull[lo])
            if best is None or s < best:
                best = s
        pt = (i, left)
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) >= 0:
            hull.pop()
        hull.append(pt)

    reps = []
    for left, _ in segs:
        reps.append(left if not reps else max(left, reps[-1] + best))
    return best, reps


def _solve_ordered(lefts, rights, colors, k):
    """q* and representatives for segments in a forced left-to-right order."""
    reps = list(lefts)
    if k == 1:
        return Fraction(0), reps
    windows = _minimal_windows(colors, k)
    best = None
    for chain in build_chains(windows):
        idx = chain.boundary
        g, pos = ordered_dispersion([(lefts[s], rights[s]) for s in idx])
        for s, r in zip(idx, pos):
            reps[s] = r
        if best is None or g < best:
            best = g
    return best, reps


def solve_disjoint(instance: Instance) -> SolveResult:
    """Optimum for pairwise-disjoint intervals of any lengths and any k."""
    _check_colors(instance.colors, instance.k)
    q, reps = _solve_ordered(instance.lefts, instance.rights,
                             instance.colors, instance.k)
    return SolveResult(q, Realization(reps), "Disjoint")


class _BackMap:
    """Lifts a realization of the reduced instance to the original one."""

    def __init__(self, n, groups):
        self.n = n
        # Each group: (member indices, reduced indices, mode) where mode is
        # "keep" (one interval), "ends" (first/last kept) or "meet".
        self.groups = groups

    def __call__(self, reduced_reps):
        out = [None] * self.n
        for members, red, mode, anchors in self.groups:
            if mode == "keep":
                out[members[0]] = Fraction(reduced_reps[red[0]])
            elif mode == "meet":
                p = Fraction(reduced_reps[red[0]])
                for j in members:
                    out[j] = p
            else:
                lo = Fraction(reduced_reps[red[0]])
                hi = Fraction(reduced_reps[red[1]])
                a, b, lefts = anchors
                for j, left in zip(members, lefts):
                    out[j] = lo if j == a else hi if j == b else max(left, lo)
        return out


def reduce_semi_disjoint(instance: Instance):
    """Collapse each group of overlapping same-color intervals.

    A connected group whose intervals share a common point becomes that
    common segment (all its points can sit together).  Otherwise only the
    interval with the smallest right end and the one with the largest left
    end are kept; the others can always be placed between those two.
    Returns the reduced, pairwise-disjoint instance and a callable mapping
    its realizations back.  The reduced instance may contain single-point
    segments.
    """
    if not instance.is_semi_disjoint:
        raise NotSemiDisjoint("two intervals of distinct colors intersect")
    ivs = instance.intervals
    comps = []
    reach = None
    for i, iv in enumerate(ivs):
        if reach is not None and iv.left <= reach:
            comps[-1].append(i)
            reach = max(reach, iv.right)
        else:
            comps.append([i])
            reach = iv.right

    reduced = []
    source = []
    groups = []
    for members in comps:
        color = ivs[members[0]].color
        if len(members) == 1:
            j = members[0]
            groups.append((members, [len(reduced)], "keep", None))
            reduced.append(ivs[j])
            source.append(j)
            continue
        a = min(members, key=lambda j: (ivs[j].right, j))
        b = max(members, key=lambda j: (ivs[j].left, j))
        if ivs[a].right < ivs[b].left:
            groups.append((members, [len(reduced), len(reduced) + 1], "ends",
                           (a, b, [ivs[j].left for j in members])))
            reduced.extend([ivs[a], ivs[b]])
            source.extend([a, b])
        else:
            lo, hi = ivs[b].left, ivs[a].right
            groups.append((members, [len(reduced)], "meet", None))
            reduced.append(ColoredInterval(lo, hi - lo, color))
            source.append(b)
    red = Instance(tuple(reduced), instance.k, instance.offset, tuple(source))
    return red, _BackMap(len(ivs), groups)


def solve_semi_disjoint(instance: Instance) -> SolveResult:
    """Optimum when no two intervals of distinct colors intersect."""
    _check_colors(instance.colors, instance.k)
    reduced, back = reduce_semi_disjoint(instance)
    q, reps = _solve_ordered(reduced.lefts, reduced.rights,
                             reduced.colors, reduced.k)
    return SolveResult(q, Realization(back(reps)), "SemiDisjoint")
