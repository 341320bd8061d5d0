"""Exact optimization for two colors with overlapping intervals.

Every optimum has the form ``(x_j + 1 - x_i) / m``.  The driver first
brackets the optimum on the ladder ``span / m`` (``span = x_n + 1 - x_1``),
which fixes a lower value ``q_minus`` with a Yes answer.  Writing every
left end as ``c*q_minus + d`` and every right end as ``a*q_minus + b``
turns each remaining candidate into ``q_minus + 1/alpha`` for the slope
``alpha`` of a pair of points ``(d, c)``, ``(b, a)``, ``(q_minus + b, a - 1)``.
Because ``q_minus + 1/alpha`` decreases in ``alpha``, a bisection over the
ranks of positive slopes, driven by :func:`~lmcsi.decision.decide`, finds
the largest candidate with a Yes answer.  Slopes are selected by rank
without listing all pairs: see :class:`_SlopeSpace`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import _slope_kernels
from ._jit import INT64_SAFE, pure_copy
from ._slope_kernels import count_inversions, inversion_pairs
from .core import Instance, KNotTwo, LmcsiError, Realization, SolveResult, as_rational
from .decision import PartMemo, decide
from .disjoint import solve_disjoint, solve_semi_disjoint

TWO = Fraction(2)


class NonPositiveM(LmcsiError):
    pass


class NoOverlap(LmcsiError):
    """No red and blue interval intersect; use the disjoint solvers."""


class KOutOfRange(LmcsiError, IndexError):
    pass


class UnsupportedK(LmcsiError):
    """More than two colors with intersecting intervals of distinct colors."""


def candidate_value(x_i, x_j, m) -> Fraction:
    """``(x_j + 1 - x_i) / m``."""
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise NonPositiveM(f"m must be a positive integer, got {m!r}")
    return (as_rational(x_j) + 1 - as_rational(x_i)) / int(m)


# ---------------------------------------------------------------------------
# Bracketing on the ladder span / m.


def _require_overlapping_pair(instance: Instance):
    if instance.k != 2:
        raise KNotTwo(f"the optimizer needs k = 2, got k = {instance.k}")
    if not instance.has_overlap:
        raise NoOverlap("no two intervals of distinct colors intersect")


def _ladder_search(instance, probe):
    lefts = instance.lefts
    span = lefts[-1] + 1 - lefts[0]
    m_lo = math.ceil(span / 2)
    m_hi = math.floor(2 * span)
    lo, hi = m_lo, m_hi + 1  # smallest m with a Yes lies in [lo, hi]
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(span / mid):
            hi = mid
        else:
            lo = mid + 1
    # m0 = 0 would leave no upper bracket; every candidate is <= span anyway.
    m0 = max(lo - 1, 1)
    return m0, span / (m0 + 1)


def find_q_minus(instance: Instance):
    """``(m0, q_minus)`` with ``q_minus = span / (m0 + 1)`` and a Yes answer at it.

    ``m0`` is one less than the smallest ``m`` whose ladder value
    ``span / m`` in ``[1/2, 2]`` has a Yes answer, but at least 1; the
    optimum then lies in ``[q_minus, span / m0]``.
    """
    _require_overlapping_pair(instance)
    return _ladder_search(instance, lambda q: decide(instance, q).answer)


# ---------------------------------------------------------------------------
# The point set.


@dataclass(frozen=True)
class SlopePointSet:
    """Points ``(x, y)`` with tags ``("l", i)``, ``("r1", j)`` or ``("r2", j)``."""

    points: tuple
    tags: tuple
    q_minus: Fraction

    def __len__(self):
        return len(self.points)


def build_point_set(instance: Instance, q_minus) -> SlopePointSet:
    q_minus = as_rational(q_minus)
    if q_minus <= 0:
        raise LmcsiError("q_minus must be positive")
    points, tags = [], []
    for i, x in enumerate(instance.lefts):
        c = x // q_minus
        points.append((x - c * q_minus, Fraction(c)))
        tags.append(("l", i))
    for j, x in enumerate(instance.lefts):
        a = (x + 1) // q_minus
        b = x + 1 - a * q_minus
        points.append((b, Fraction(a)))
        tags.append(("r1", j))
        points.append((q_minus + b, Fraction(a - 1)))
        tags.append(("r2", j))
    return SlopePointSet(tuple(points), tuple(tags), q_minus)


# ---------------------------------------------------------------------------
# Slope counting and selection.


class _Bound:
    """A position just left (``side=-1``) or right (``side=+1``) of slope ``p/r``.

    ``r = 0`` encodes an infinite slope with the sign of ``p``.  The number
    of pairwise slopes strictly left of the bound is its *count*.
    """

    __slots__ = ("p", "r", "side")

    def __init__(self, p, r, side):
        if r < 0:
            p, r = -p, -r
        if r == 0:
            p, side = (1 if p > 0 else -1), 0
        else:
            g = math.gcd(int(p), int(r))
            p, r = int(p) // g, int(r) // g
        self.p, self.r, self.side = int(p), int(r), side

    def key(self):
        return (self.p, self.r, self.side)


NEG_INF = _Bound(-1, 0, 0)
POS_INF = _Bound(1, 0, 0)


class _SlopeSpace:
    """Integer points with rank-based slope queries.

    For a bound ``s`` the points are ordered along a line of slope just off
    ``s``: by ``y - s*x``, ties by ``x`` so that collinear pairs fall on the
    correct side.  Two points swap order between bounds ``s1 < s2`` exactly
    when their slope lies between them, and points with equal ``x`` never
    swap, which excludes vertical and coincident pairs.  Counting and
    sampling those swaps (inversions) gives counts and random slopes in a
    range; once a range holds few enough slopes they are listed and sorted.
    """

    def __init__(self, xs, ys, seed=0):
        xs = [int(v) for v in xs]
        ys = [int(v) for v in ys]
        self.n = len(xs)
        span_x = max(xs) - min(xs) if xs else 0
        span_y = max(ys) - min(ys) if ys else 0
        mag_x = max((abs(v) for v in xs), default=0)
        mag_y = max((abs(v) for v in ys), default=0)
        # |w| for a bound p/r built from two points is below this.
        self._wmax = 2 * (span_x * mag_y + span_y * mag_x) + 4
        small = max(self._wmax, 4 * span_x * span_y + 4) < INT64_SAFE >> 2
        dtype = np.int64 if small else object
        self.x = np.array(xs, dtype=dtype)
        self.y = np.array(ys, dtype=dtype)
        self.K = _slope_kernels if small else pure_copy(_slope_kernels)
        self.span_x, self.span_y = span_x, span_y
        self.mag_x, self.mag_y = mag_x, mag_y
        self.rng = np.random.default_rng(seed)
        self._orders = {}
        self.base = self.order(NEG_INF)
        self.total = self.count(POS_INF)
        self.limit = max(4 * self.n, 1 << 14)

    def order(self, bound: _Bound):
        key = bound.key()
        hit = self._orders.get(key)
        if hit is not None:
            return hit
        x, y = self.x, self.y
        if bound.r == 0:
            perm = np.lexsort((y, x)) if bound.p < 0 else np.lexsort((y, -x))
        else:
            p, r = bound.p, bound.r
            if abs(r) * self.mag_y + abs(p) * self.mag_x < INT64_SAFE >> 2 and x.dtype != object:
                w = r * y - p * x
            else:
                xo, yo = x.astype(object), y.astype(object)
                w = r * yo - p * xo
            perm = np.lexsort((-bound.side * x, w))
        perm = perm.astype(np.int64)
        if len(self._orders) > 8:
            self._orders.pop(next(iter(self._orders)))
        self._orders[key] = perm
        return perm

    @staticmethod
    def _ranks(perm):
        rank = np.empty(perm.shape[0], np.int64)
        rank[perm] = np.arange(perm.shape[0])
        return rank

    def between(self, b1: _Bound, b2: _Bound):
        """Sequence whose inversions are the pairs with slope between the bounds."""
        p2 = self.order(b2)
        return self._ranks(p2)[self.order(b1)], p2

    def count(self, bound: _Bound) -> int:
        if bound is NEG_INF:
            return 0
        seq, _ = self.between(NEG_INF, bound)
        return int(count_inversions(seq))

    def slopes(self, big, small, perm2):
        u, v = perm2[big], perm2[small]
        num = self.y[u] - self.y[v]
        den = self.x[u] - self.x[v]
        neg = den < 0
        num = np.where(neg, -num, num)
        den = np.where(neg, -den, den)
        return num, den

    def fraction_order(self, num, den):
        """Stable argsort of the fractions ``num / den``."""
        if num.dtype == object:
            return self.K.fraction_argsort(num, den)
        rough = np.argsort(num / den, kind="stable")
        return self.K.repair_fraction_order(num, den, rough.astype(np.int64))

    def pivot(self, b1, b2, count, sample=1023):
        """Median of a random sample of the ``count`` slopes between the bounds."""
        seq, perm2 = self.between(b1, b2)
        r = min(count, sample)
        targets = np.sort(self.rng.integers(0, count, r)).astype(np.int64)
        big, small = inversion_pairs(seq, targets)
        num, den = self.slopes(big, small, perm2)
        t = self.fraction_order(num, den)[r // 2]
        return num[t], den[t]

    def sorted_between(self, b1, b2, count):
        seq, perm2 = self.between(b1, b2)
        big, small = inversion_pairs(seq, np.arange(count, dtype=np.int64))
        num, den = self.slopes(big, small, perm2)
        o = self.fraction_order(num, den)
        return num[o], den[o]

    def select(self, k, b1=NEG_INF, c1=0, b2=POS_INF, c2=None):
        """The ``k``-th smallest slope as ``(num, den)``, given ``c1 < k <= c2``."""
        if c2 is None:
            c2 = self.total
        if not c1 < k <= c2:
            raise KOutOfRange(f"rank {k} is outside ({c1}, {c2}]")
        stuck = False
        while True:
            if b1.r and b2.r and b1.p * b2.r == b2.p * b1.r:
                return b1.p, b1.r  # only ties left
            size = c2 - c1
            if size <= self.limit or (stuck and size <= 1 << 20):
                num, den = self.sorted_between(b1, b2, size)
                t = k - c1 - 1
                return num[t], den[t]
            seq, perm2 = self.between(b1, b2)
            r = min(size, max(self.n, 1024))
            targets = np.sort(self.rng.integers(0, size, r)).astype(np.int64)
            big, small = inversion_pairs(seq, targets)
            num, den = self.slopes(big, small, perm2)
            o = self.fraction_order(num, den)
            pos = (k - c1) * r / size
            slack = 2.0 * math.sqrt(r) + 1
            lo_i, hi_i = int(pos - slack), int(pos + slack)
            for t in (lo_i, hi_i):
                if not 0 <= t < r:
                    continue
                v_num, v_den = num[o[t]], den[o[t]]
                below, upto = _Bound(v_num, v_den, -1), _Bound(v_num, v_den, +1)
                # Sampled low: its value is probably under rank k, so try
                # the count through its ties first; sampled high: the reverse.
                first, second = (upto, below) if t == lo_i else (below, upto)
                for b in (first, second):
                    nc = self.count(b)
                    if b.side > 0 and nc < k:
                        if nc > c1:
                            b1, c1 = b, nc
                        break
                    if b.side < 0 and k <= nc:
                        if nc < c2:
                            b2, c2 = b, nc
                        break
                else:
                    return v_num, v_den  # rank k lies in the tie block of v
            stuck = c2 - c1 == size  # the sample was too small to help


def _space_for(point_set):
    pts = point_set.points if isinstance(point_set, SlopePointSet) else tuple(point_set)
    pts = [(as_rational(x), as_rational(y)) for x, y in pts]
    dx = lcm(1, *(x.denominator for x, _ in pts))
    dy = lcm(1, *(y.denominator for _, y in pts))
    space = _SlopeSpace([x * dx for x, _ in pts], [y * dy for _, y in pts])
    return space, Fraction(dx, dy)


def kth_slope(point_set, k: int) -> Fraction:
    """The ``k``-th smallest (1-based) slope over pairs with distinct ``x``."""
    space, scale = _space_for(point_set)
    if not 1 <= k <= space.total:
        raise KOutOfRange(f"k = {k} but there are {space.total} slopes")
    num, den = space.select(k)
    return Fraction(int(num), int(den)) * scale


def count_slopes_below(point_set, s, strict: bool = True) -> int:
    """Number of slopes ``< s`` (``<= s`` when ``strict`` is false)."""
    space, scale = _space_for(point_set)
    s = as_rational(s) / scale
    return space.count(_Bound(s.numerator, s.denominator, -1 if strict else +1))


# ---------------------------------------------------------------------------
# The driver.


class _Prober:
    """Decisions with the trivial ranges short-cut and Yes witnesses kept."""

    def __init__(self, instance):
        self.instance = instance
        self.yes = {}
        self.calls = 0
        self.memo = PartMemo()

    def __call__(self, q) -> bool:
        if q > TWO:
            return False  # an intersecting red-blue pair is at most 2 apart
        if q in self.yes:
            return True
        self.calls += 1
        out = decide(self.instance, q, memo=self.memo)
        if out.answer:
            self.yes[q] = out
        return out.answer

    def witness(self, q) -> Realization:
        out = self.yes.get(q)
        if out is None:
            out = decide(self.instance, q)
        return out.realization


def _scaled_points(instance, q_minus):
    den, xs = instance.grid
    S = lcm(den, q_minus.denominator)
    mult = S // den
    Q = q_minus.numerator * (S // q_minus.denominator)
    px, py = [], []
    for x in xs:
        c, d = divmod(x * mult, Q)
        px.append(d)
        py.append(c)
    for x in xs:
        a, b = divmod(x * mult + S, Q)
        px.append(b)
        py.append(a)
        px.append(Q + b)
        py.append(a - 1)
    return px, py, S


def optimize(instance: Instance) -> SolveResult:
    """Largest ``q`` with a Yes answer, with a witness realization."""
    _require_overlapping_pair(instance)
    probe = _Prober(instance)
    _, q_minus = _ladder_search(instance, probe)
    q_star = _search_slopes(instance, q_minus, probe)
    return SolveResult(q_star, probe.witness(q_star), "TwoColor")


def _search_slopes(instance, q_minus, probe) -> Fraction:
    px, py, S = _scaled_points(instance, q_minus)
    space = _SlopeSpace(px, py)

    def value(num, den):
        return q_minus + Fraction(int(den), S * int(num))

    total = space.total
    zero = _Bound(0, 1, +1)
    z = space.count(zero)  # slopes <= 0
    if z == total:
        return q_minus
    g_num, g_den = space.select(total, zero, z)
    if not probe(value(g_num, g_den)):
        return q_minus
    d_num, d_den = space.select(z + 1, zero, z)
    if probe(value(d_num, d_den)):
        return value(d_num, d_den)

    # Invariant: rank i has a No answer, rank j a Yes answer, and the ranks
    # strictly between them are the slopes strictly between the two values.
    b1 = _Bound(d_num, d_den, +1)
    i = space.count(b1)
    b2 = _Bound(g_num, g_den, -1)
    c2 = space.count(b2)
    j, best = c2 + 1, (g_num, g_den)
    listed = None
    while j > i + 1:
        if listed is None and j - 1 - i <= space.limit:
            listed = (i, *space.sorted_between(b1, b2, j - 1 - i))
        k = (i + j) // 2
        if listed is None:
            # A sampled median of the ranks in between: roughly halfway,
            # and much cheaper than selecting rank k exactly.
            num, den = space.pivot(b1, b2, j - 1 - i)
        else:
            num, den = listed[1][k - listed[0] - 1], listed[2][k - listed[0] - 1]
        if probe(value(num, den)):
            best = (num, den)
            b2 = _Bound(num, den, -1)
            j = _tie_edge(space, listed, b2, k, -1) + 1
        else:
            b1 = _Bound(num, den, +1)
            i = _tie_edge(space, listed, b1, k, +1)
    return value(*best)


def _tie_edge(space, listed, bound, k, side):
    """Last rank below the tie block of ``bound``'s value (side -1), or last in it (+1)."""
    if listed is None:
        return space.count(bound)
    base, num, den = listed
    t = k - base - 1
    p, r = bound.p, bound.r
    step = 1 if side > 0 else -1
    while 0 <= t + step < len(num) and num[t + step] * r == p * den[t + step]:
        t += step
    return t + base + 1 if side > 0 else t + base


def solve(instance: Instance) -> SolveResult:
    """Optimum for any supported instance.

    Instances where no two intervals of distinct colors intersect go to the
    linear-time solvers for any number of colors; two-color instances with
    intersections go to :func:`optimize`.
    """
    if instance.is_semi_disjoint:
        if instance.is_pairwise_disjoint:
            return solve_disjoint(instance)
        return solve_semi_disjoint(instance)
    if instance.k != 2:
        raise UnsupportedK(
            f"k = {instance.k} with intersecting intervals of distinct colors is not supported")
    return optimize(instance)


__all__ = [
    "KOutOfRange", "NoOverlap", "NonPositiveM", "SlopePointSet", "UnsupportedK",
    "build_point_set", "candidate_value", "count_slopes_below", "find_q_minus",
    "kth_slope", "optimize", "solve",
]
