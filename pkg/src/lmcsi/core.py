"""Exact data model for colored-interval instances and their realizations.

Every coordinate is a :class:`fractions.Fraction`.  An :class:`Instance`
holds its intervals sorted by left endpoint and translated so the leftmost
one starts at 0; the translation and the input order are kept so answers
can be mapped back to the caller's coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class LmcsiError(ValueError):
    """Base class of every error raised by this package."""


class EmptyInput(LmcsiError):
    pass


class DuplicateSameColorPosition(LmcsiError):
    pass


class NonPositiveLength(LmcsiError):
    pass


class MissingColor(LmcsiError):
    pass


class KNotTwo(LmcsiError):
    pass


class MalformedInput(LmcsiError):
    pass


def as_rational(value) -> Fraction:
    """Parse an int, Fraction, or a string such as ``"3/4"`` or ``"0.25"``.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, bool):
        raise MalformedInput(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"not a rational: {value!r}") from exc
    raise MalformedInput(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical text form: ``"p"`` for integers, ``"p/q"`` otherwise."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ColoredInterval:
    left: Fraction
    length: Fraction
    color: int

    @property
    def right(self) -> Fraction:
        return self.left + self.length

    def contains(self, point) -> bool:
        return self.left <= point <= self.left + self.length


@dataclass(frozen=True)
class Realization:
    reps: tuple

    def __init__(self, reps: Iterable):
        object.__setattr__(self, "reps", tuple(Fraction(r) for r in reps))

    def __len__(self):
        return len(self.reps)

    def __getitem__(self, i):
        return self.reps[i]

    def __iter__(self):
        return iter(self.reps)


@dataclass(frozen=True)
class SolveResult:
    q_star: Fraction
    realization: Realization
    method: str  # "Disjoint", "SemiDisjoint" or "TwoColor"


@dataclass(frozen=True, eq=False)
class Instance:
    """Sorted colored intervals.

    ``offset`` is what was subtracted from the input coordinates, and
    ``source[i]`` is the position of interval ``i`` in the parent sequence
    (the raw input for validated instances, the parent instance for the
    pieces produced by :func:`split_by_gaps`).
    """

    intervals: tuple
    k: int
    offset: Fraction = Fraction(0)
    source: tuple = field(default=())

    def __post_init__(self):
        if not self.source:
            object.__setattr__(self, "source", tuple(range(len(self.intervals))))

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    @cached_property
    def lefts(self) -> tuple:
        return tuple(iv.left for iv in self.intervals)

    @cached_property
    def rights(self) -> tuple:
        return tuple(iv.right for iv in self.intervals)

    @cached_property
    def colors(self) -> tuple:
        return tuple(iv.color for iv in self.intervals)

    @cached_property
    def is_unit(self) -> bool:
        return all(iv.length == 1 for iv in self.intervals)

    @cached_property
    def is_pairwise_disjoint(self) -> bool:
        reach = None
        for iv in self.intervals:
            if reach is not None and iv.left <= reach:
                return False
            reach = iv.right if reach is None else max(reach, iv.right)
        return True

    @cached_property
    def is_semi_disjoint(self) -> bool:
        # Track the largest right endpoint seen, and the largest one among
        # the other colors; an interval clashes with an earlier one of
        # another color iff that color's reach covers its left endpoint.
        best = second = None
        best_color = None
        for iv in self.intervals:
            rival = second if iv.color == best_color else best
            if rival is not None and rival >= iv.left:
                return False
            if iv.color == best_color:
                best = max(best, iv.right)
            elif best is None or iv.right > best:
                second, best, best_color = best, iv.right, iv.color
            elif second is None or iv.right > second:
                second = iv.right
        return True

    @cached_property
    def has_overlap(self) -> bool:
        """True when two intervals of distinct colors intersect."""
        return not self.is_semi_disjoint

    @cached_property
    def grid(self) -> tuple:
        """``(D, X)`` with ``X[i] = lefts[i] * D`` integral, D minimal."""
        den = 1
        for x in self.lefts:
            den = lcm(den, x.denominator)
        return den, tuple(int(x * den) for x in self.lefts)

    def to_input_order(self, reps: Sequence) -> list:
        """Map representatives back to the caller's order and coordinates."""
        out = [None] * len(reps)
        for i, r in enumerate(reps):
            out[self.source[i]] = Fraction(r) + self.offset
        return out

    def from_input_order(self, reps: Sequence) -> list:
        """Inverse of :meth:`to_input_order`."""
        if len(reps) != len(self.intervals):
            raise MalformedInput(
                f"expected {len(self.intervals)} representatives, got {len(reps)}")
        return [as_rational(reps[self.source[i]]) - self.offset
                for i in range(len(self.intervals))]


def _coerce_interval(item) -> ColoredInterval:
    if isinstance(item, ColoredInterval):
        return item
    if isinstance(item, Mapping):
        try:
            left = as_rational(item["x"])
            color = item["color"]
        except KeyError as exc:
            raise MalformedInput(f"interval needs 'x' and 'color': {item!r}") from exc
        length = as_rational(item.get("len", 1))
    elif isinstance(item, (tuple, list)) and len(item) in (2, 3):
        left = as_rational(item[0])
        length = as_rational(item[1]) if len(item) == 3 else Fraction(1)
        color = item[-1]
    else:
        raise MalformedInput(f"cannot read interval {item!r}")
    if isinstance(color, bool) or not isinstance(color, int) or color < 0:
        raise MalformedInput(f"color must be a non-negative integer: {color!r}")
    return ColoredInterval(left, length, color)


def validate(raw_intervals, k: int | None = None) -> Instance:
    """Build a normalized :class:`Instance` from raw intervals.

    Items may be :class:`ColoredInterval` objects, ``{"x", "len", "color"}``
    mappings, ``(left, color)`` pairs (unit length) or ``(left, length,
    color)`` triples.  When ``k`` is omitted it is ``max color + 1``.
    """
    items = [_coerce_interval(it) for it in raw_intervals]
    if not items:
        raise EmptyInput("an instance needs at least one interval")
    for iv in items:
        if iv.length <= 0:
            raise NonPositiveLength(f"interval at {iv.left} has length {iv.length}")
    if k is None:
        k = max(iv.color for iv in items) + 1
    present = {iv.color for iv in items}
    if any(c >= k for c in present):
        raise MalformedInput(f"color id outside [0, {k})")
    missing = set(range(k)) - present
    if missing:
        raise MissingColor(f"colors {sorted(missing)} have no interval")

    order = sorted(range(len(items)), key=lambda i: items[i].left)
    seen = set()
    for i in order:
        key = (items[i].left, items[i].length, items[i].color)
        if key in seen:
            raise DuplicateSameColorPosition(
                f"two intervals of color {items[i].color} at {items[i].left}")
        seen.add(key)

    offset = items[order[0]].left
    intervals = tuple(
        ColoredInterval(items[i].left - offset, items[i].length, items[i].color)
        for i in order)
    return Instance(intervals, k, offset, tuple(order))


def inside(instance: Instance, reps: Sequence) -> bool:
    """True iff every representative lies in its own interval."""
    return len(reps) == len(instance) and all(
        iv.contains(r) for iv, r in zip(instance.intervals, reps))


def min_spanning_window(points: Sequence, k: int):
    """Shortest window containing all ``k`` colors of ``(pos, color)`` points.

    ``points`` must be sorted by position.  Returns ``None`` when some color
    is absent.
    """
    counts = [0] * k
    missing = k
    best = None
    lo = 0
    for hi, (pos, color) in enumerate(points):
        if counts[color] == 0:
            missing -= 1
        counts[color] += 1
        while missing == 0:
            width = pos - points[lo][0]
            if best is None or width < best:
                best = width
            c = points[lo][1]
            counts[c] -= 1
            if counts[c] == 0:
                missing += 1
            lo += 1
    return best


def mcsi_length(instance: Instance, realization) -> Fraction:
    """Length of a minimum color-spanning interval of the realization."""
    if instance.k == 1:
        return Fraction(0)
    points = sorted(zip(realization, instance.colors))
    best = min_spanning_window(points, instance.k)
    if best is None:
        raise MissingColor("the realization does not use every color")
    return Fraction(best)


def separation_ok(instance: Instance, realization, q) -> bool:
    """True iff every pair of representatives of distinct colors is ≥ q apart."""
    if instance.k != 2:
        raise KNotTwo(f"separation is defined for two colors, got k={instance.k}")
    q = Fraction(q)
    points = sorted(zip(realization, instance.colors))
    # The closest bichromatic pair is adjacent in sorted order.
    for (p, c), (p2, c2) in zip(points, points[1:]):
        if c != c2 and p2 - p < q:
            return False
    return True


def split_by_gaps(instance: Instance, q) -> list:
    """Cut the instance wherever the empty gap between intervals is ≥ q.

    Each piece is re-normalized to start at 0 and records, in ``source``,
    the positions of its intervals in ``instance``.
    """
    q = Fraction(q)
    pieces = []
    start = 0
    reach = None
    ivs = instance.intervals
    for i, iv in enumerate(ivs):
        if reach is not None and iv.left - reach >= q:
            pieces.append((start, i))
            start = i
        reach = iv.right if reach is None else max(reach, iv.right)
    pieces.append((start, len(ivs)))

    out = []
    for lo, hi in pieces:
        shift = ivs[lo].left
        part = tuple(ColoredInterval(iv.left - shift, iv.length, iv.color)
                     for iv in ivs[lo:hi])
        out.append(Instance(part, instance.k, instance.offset + shift,
                            tuple(range(lo, hi))))
    return out


def load_instance(source) -> Instance:
    """Read an instance from a JSON path, JSON text, or an already-parsed dict."""
    if isinstance(source, Mapping):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(data, Mapping) or "intervals" not in data:
        raise MalformedInput("instance JSON needs an 'intervals' list")
    k = data.get("k")
    if k is not None and (isinstance(k, bool) or not isinstance(k, int) or k < 1):
        raise MalformedInput(f"bad k: {k!r}")
    intervals = data["intervals"]
    if not isinstance(intervals, list):
        raise MalformedInput("'intervals' must be a list")
    return validate(intervals, k)


def instance_to_json(instance: Instance) -> dict:
    """Serialize in the caller's original order and coordinates."""
    rows = [None] * len(instance)
    for i, iv in enumerate(instance.intervals):
        row = {"x": format_rational(iv.left + instance.offset), "color": iv.color}
        if iv.length != 1:
            row["len"] = format_rational(iv.length)
        rows[instance.source[i]] = row
    return {"k": instance.k, "intervals": rows}


def result_to_json(instance: Instance, q_star, reps, method: str | None = None) -> dict:
    out = {"q_star": format_rational(q_star),
           "reps": [format_rational(r) for r in instance.to_input_order(reps)]}
    if method is not None:
        out["method"] = method
    return out
