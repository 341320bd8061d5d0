"""Seeded instance families used by the tests, the CLI and the benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import ColoredInterval, LmcsiError, validate

FAMILIES = ("Disjoint", "SemiDisjoint", "TwoColorOverlap",
            "LowerBoundFamily", "UpperBoundPair")


def _spread_colors(rng, n, k):
    colors = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
    rng.shuffle(colors)
    return colors


def disjoint(n, k, seed, den=8, max_len=2):
    """Pairwise-disjoint intervals with random lengths and gaps."""
    if n < k:
        raise LmcsiError("need n >= k so that every color occurs")
    rng = random.Random(seed)
    colors = _spread_colors(rng, n, k)
    out, x = [], Fraction(0)
    for c in colors:
        length = Fraction(rng.randint(1, max_len * den), den)
        out.append(ColoredInterval(x, length, c))
        x += length + Fraction(rng.randint(1, 2 * den), den)
    return validate(out, k)


def semi_disjoint(n, k, seed, den=8):
    """Unit intervals where only same-color intervals overlap."""
    if n < k:
        raise LmcsiError("need n >= k so that every color occurs")
    rng = random.Random(seed)
    colors = _spread_colors(rng, n, k)
    out, x, prev = [], Fraction(0), None
    reach = None
    for c in colors:
        if prev is not None:
            if c == prev and rng.random() < 0.7:
                x += Fraction(rng.randint(1, den), den)  # overlap or touch
            else:
                x = reach + Fraction(rng.randint(1, 2 * den), den)
        out.append(ColoredInterval(x, Fraction(1), c))
        reach = x + 1 if reach is None else max(reach, x + 1)
        prev = c
    return validate(out, k)


def two_color_overlap(n, seed, den=8, width=None):
    """Two-color unit intervals on a grid, with at least one bichromatic overlap.

    Left endpoints are multiples of ``1/den`` in ``[0, width]``; the default
    width grows with ``n`` so that the density stays moderate.
    """
    if n < 2:
        raise LmcsiError("need at least two intervals")
    rng = random.Random(seed)
    if width is None:
        width = Fraction(max(1, n // 2))
    slots = int(width * den) + 1
    if slots * 2 < n:
        raise LmcsiError("grid too small for n distinct intervals")
    while True:
        if n <= slots:
            picks = sorted(rng.sample(range(slots), n))
            cells = [(p, rng.randrange(2)) for p in picks]
        else:
            cells = sorted(rng.sample([(p, c) for p in range(slots) for c in (0, 1)], n))
        colors = {c for _, c in cells}
        if len(colors) < 2:
            continue
        inst = validate([ColoredInterval(Fraction(p, den), Fraction(1), c)
                         for p, c in cells], 2)
        if inst.has_overlap:
            return inst


def lower_bound_family(n=4, eps=None):
    """Reds with left ends at 0, eps, ..., 1 and one blue with left end 1/2."""
    if eps is None:
        if n < 3:
            raise LmcsiError("the family needs at least three intervals")
        eps = Fraction(1, n - 2)
    eps = Fraction(eps)
    steps = int(1 / eps)
    if steps * eps != 1:
        raise LmcsiError("eps must divide 1")
    reds = [(eps * t, 0) for t in range(steps + 1)]
    return validate(reds + [(Fraction(1, 2), 1)], 2)


def upper_bound_pair():
    """Red [0, 1] and blue [1, 2]: the pair touching at a single point."""
    return validate([(0, 0), (1, 1)], 2)


def generate(family, n, k=2, seed=0, den=8):
    if family == "Disjoint":
        return disjoint(n, k, seed, den)
    if family == "SemiDisjoint":
        return semi_disjoint(n, k, seed, den)
    if family == "TwoColorOverlap":
        return two_color_overlap(n, seed, den)
    if family == "LowerBoundFamily":
        return lower_bound_family(n)
    if family == "UpperBoundPair":
        return upper_bound_pair()
    raise LmcsiError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
