"""Brute-force reference answers for small instances.

The decision search only tries positions of the form ``x_a + m*q``: in a
leftmost solution every representative sits at a left endpoint or exactly
``q`` to the right of another representative, so chains of at most ``n``
steps reach every position that can occur.  The optimum is then found by
bisecting a finite candidate list with that decision procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import Instance, LmcsiError, min_spanning_window


class BudgetExceeded(LmcsiError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 8
    max_positions_per_interval: int = 200


DEFAULT_BUDGET = OracleBudget()


def _check_budget(instance: Instance, budget: OracleBudget):
    if len(instance) > budget.max_n:
        raise BudgetExceeded(
            f"oracle limited to n <= {budget.max_n}, got n = {len(instance)}")


def candidate_positions(instance: Instance, q, i: int, steps: int | None = None) -> list:
    """Sorted positions ``x_a + m*q`` (``0 <= m <= steps``) inside interval ``i``."""
    q = Fraction(q)
    n = len(instance)
    steps = n if steps is None else steps
    iv = instance[i]
    found = set()
    for x in instance.lefts:
        if x > iv.right:
            continue
        # Smallest m with x + m*q >= left, then walk while inside.
        m = 0 if x >= iv.left else -((x - iv.left) // q)
        while m <= steps:
            p = x + m * q
            if p > iv.right:
                break
            found.add(p)
            m += 1
    return sorted(found)


def oracle_witness(instance: Instance, q, budget: OracleBudget = DEFAULT_BUDGET):
    """A realization with minimum color-spanning interval ≥ q, or None.

    Works for any number of colors: a partial assignment is rejected as soon
    as some window shorter than ``q`` already holds every color.
    """
    _check_budget(instance, budget)
    q = Fraction(q)
    n, k = len(instance), instance.k
    if k == 1:
        return list(instance.lefts) if q <= 0 else None
    colors = instance.colors
    lefts = instance.lefts
    domains = [candidate_positions(instance, q, i) for i in range(n)]
    if any(len(d) > budget.max_positions_per_interval for d in domains):
        raise BudgetExceeded("too many candidate positions")

    def clashes(active, pos, color):
        if k == 2:
            return any(c != color and abs(p - pos) < q for p, c in active)
        pts = sorted(active + ((pos, color),))
        width = min_spanning_window(pts, k)
        return width is not None and width < q

    @lru_cache(maxsize=None)
    def search(t, active):
        # ``active`` holds the placed points that can still matter: anything
        # at or left of lefts[t] - q is at least q from every later point.
        if t == n:
            return ()
        for pos in domains[t]:
            if clashes(active, pos, colors[t]):
                continue
            nxt = active + ((pos, colors[t]),)
            if t + 1 < n:
                cut = lefts[t + 1] - q
                nxt = tuple(sorted(pc for pc in nxt if pc[0] > cut))
            rest = search(t + 1, nxt)
            if rest is not None:
                return (pos,) + rest
        return None

    found = search(0, ())
    return None if found is None else list(found)


def oracle_decide(instance: Instance, q, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Exhaustive answer to "is there a realization with MCSI ≥ q?"."""
    return oracle_witness(instance, q, budget) is not None


def candidate_values(instance: Instance, max_m: int | None = None) -> list:
    """Sorted distinct positive values ``(right_j - left_i)/m`` for m ≤ max_m."""
    n = len(instance)
    max_m = n if max_m is None else max_m
    vals = set()
    for a in instance.lefts:
        for b in instance.rights:
            if b > a:
                for m in range(1, max_m + 1):
                    vals.add((b - a) / m)
    return sorted(vals)


def _minimal_windows_bruteforce(colors, k):
    n = len(colors)
    covering = [(a, b) for a in range(n) for b in range(a, n)
                if len(set(colors[a:b + 1])) == k]
    cover = set(covering)
    return [(a, b) for a, b in covering
            if (a + 1, b) not in cover and (a, b - 1) not in cover]


def _ordered_feasible(instance: Instance, windows, q):
    """Greedy leftmost placement for a fixed left-to-right order of points."""
    reps = []
    need = [None] * len(instance)
    for a, b in windows:
        need[b] = (need[b] or []) + [a]
    for i, iv in enumerate(instance.intervals):
        r = iv.left
        for a in need[i] or ():
            r = max(r, reps[a] + q)
        if r > iv.right:
            return None
        reps.append(r)
    return reps


def _largest_feasible(cands, feasible):
    lo, hi = 0, len(cands) - 1
    if not feasible(cands[lo]):
        raise LmcsiError("no candidate value is feasible")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(cands[mid]):
            lo = mid
        else:
            hi = mid - 1
    return cands[lo]


def oracle_optimize(instance: Instance, budget: OracleBudget = DEFAULT_BUDGET) -> Fraction:
    """Exhaustive optimum of the minimum color-spanning interval length.

    Pairwise-disjoint instances have a forced order, so feasibility of a
    spacing reduces to a greedy pass over the (brute-forced) minimal color
    windows.  Everything else goes through :func:`oracle_decide`.
    """
    _check_budget(instance, budget)
    if instance.k == 1:
        return Fraction(0)
    cands = candidate_values(instance)
    if instance.is_pairwise_disjoint:
        windows = _minimal_windows_bruteforce(instance.colors, instance.k)
        return _largest_feasible(
            cands, lambda q: _ordered_feasible(instance, windows, q) is not None)
    return _largest_feasible(cands, lambda q: oracle_decide(instance, q, budget))
