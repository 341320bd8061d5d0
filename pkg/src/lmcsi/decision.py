"""Two-color decision procedures: can every red-blue pair be kept ``q`` apart?

:func:`decide` picks a procedure by the range of ``q`` (unit intervals):

* ``q <= 1/2``: always possible; reds go to integers, blues to half-integers.
* ``q in (1/2, 3/4]``: concatenation of maximal "tabular" runs, i.e. blocks
  of points that start at a left endpoint and alternate colors in exact
  ``q`` steps (:func:`decide_low`).
* ``q in (3/4, 1]``: dynamic program over the components of the graph
  linking red and blue intervals that overlap by at least ``q``
  (:func:`decide_mid`).
* ``q > 1``: the order of the points is forced, so a greedy pass decides
  (:func:`decide_high`).

Each procedure works on integers: the instance and ``q`` are scaled by a
common denominator and handed to the kernels in :mod:`lmcsi._kernels`.
Every witness is returned in leftmost form: each point sits at its
interval's left endpoint or exactly ``q`` right of a point of the other
color.

Set ``MCSI_DEBUG_AUDIT=1`` to cross-check internal tables against direct
simulation on every call.
"""

from __future__ import annotations

import bisect
import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from ._jit import INT64_SAFE, pure_copy
from .core import (Instance, KNotTwo, LmcsiError, Realization, as_rational)

HALF = Fraction(1, 2)
THREE_QUARTERS = Fraction(3, 4)

#: How many times :func:`decide` used each procedure in this process.
BRANCH_COUNTS: Counter = Counter()


class NotUnit(LmcsiError):
    pass


class OutOfRange(LmcsiError):
    pass


class DecisionInconsistency(RuntimeError):
    """An internal check failed; this indicates a bug, not bad input."""


def audit_enabled() -> bool:
    return os.environ.get("MCSI_DEBUG_AUDIT") == "1"


# ---------------------------------------------------------------------------
# Scaling to integers.


class _Frame:
    """``instance`` and ``q`` scaled so that lefts, lengths and ``q`` are ints."""

    def __init__(self, instance: Instance, q: Fraction):
        den, xs = instance.grid
        S = lcm(den, q.denominator, 2)
        mult = S // den
        self.S = S
        self.U = S
        self.Q = q.numerator * (S // q.denominator)
        n = len(instance)
        bound = (xs[-1] * mult if xs else 0) + (n + 8) * 4 * (self.U + self.Q)
        if bound < INT64_SAFE >> 2:
            self.K = _kernels
            self.X = np.array(xs, dtype=np.int64) * mult
            self.U = np.int64(self.U)
            self.Q = np.int64(self.Q)
        else:
            self.K = pure_copy(_kernels)
            self.X = np.array([x * mult for x in xs], dtype=object)
        self.C = np.array(instance.colors, dtype=np.int64)

    def value(self, v) -> Fraction:
        return Fraction(int(v), self.S)

    def parts(self):
        return self.K.split_parts(self.X, self.U, self.Q)


# ---------------------------------------------------------------------------
# Outcomes and records.


class DecisionOutcome:
    """Answer to a decision query.

    ``realization`` (Yes only) is built on first access from the integer
    witness, which keeps repeated decisions inside the optimizer cheap.
    ``blocked_at`` is, when known for a No, the first interval of a gap-free
    part that has no solution on its own.
    """

    __slots__ = ("answer", "branch", "q", "blocked_at", "_frame", "_raw", "_real", "_source")

    def __init__(self, answer: bool, branch: str, q: Fraction, frame=None, raw=None,
                 blocked_at=None, source=None):
        self.answer = answer
        self.branch = branch
        self.q = q
        self.blocked_at = blocked_at
        self._frame = frame
        self._raw = raw
        self._real = None
        self._source = source  # instance to re-solve when no witness was kept

    def __bool__(self):
        return self.answer

    def __repr__(self):
        return f"DecisionOutcome({'Yes' if self.answer else 'No'}, q={self.q}, branch={self.branch!r})"

    @property
    def realization(self) -> Realization | None:
        if not self.answer:
            return None
        if self._raw is None:
            full = decide(self._source, self.q)
            self._frame, self._raw = full._frame, full._raw
        if self._real is None:
            S = self._frame.S
            self._real = Realization(Fraction(int(v), S) for v in self._raw)
        return self._real


class PartMemo:
    """What earlier calls on one instance showed about each gap-free part.

    Parts are independent and each one's answer is monotone in ``q``, so a
    part that was Yes at some ``q'`` is Yes below it and a part that was No
    is No above it.  Bounds are stored as floats and compared strictly;
    float rounding is monotone, so a strict float comparison implies the
    exact one and ties just cause a recheck.
    """

    def __init__(self):
        self.starts = np.zeros(1, np.int64)
        self.yes = np.empty(0)
        self.no = np.empty(0)

    def align(self, starts):
        """Arrays for this partition, carrying over parts seen before."""
        if not np.array_equal(starts, self.starts):
            yes = np.full(len(starts) - 1, -np.inf)
            no = np.full(len(starts) - 1, np.inf)
            old = self.starts
            if len(old) > 1:
                j = np.minimum(np.searchsorted(old, starts[:-1]), len(old) - 2)
                same = (old[j] == starts[:-1]) & (old[j + 1] == starts[1:])
                yes[same] = self.yes[j[same]]
                no[same] = self.no[j[same]]
            self.starts, self.yes, self.no = np.asarray(starts).copy(), yes, no
        return self.yes, self.no


@dataclass(frozen=True)
class ComponentH:
    members: tuple
    span: tuple  # (leftmost point, rightmost point) of the member intervals


@dataclass(frozen=True)
class MaximalTabular:
    start_index: int
    start_color: int
    steps: int
    rightmost_pos: Fraction
    max_r: int
    max_b: int


@dataclass(frozen=True)
class FamilyPointers:
    o_lt: int       # rightmost opposite interval with x in (x_i - 1 - q, x_i - q]
    s_lt: int       # rightmost same-color interval left of x_i
    o_ltlt: int     # rightmost opposite interval with x <= x_i - 1 - q
    o_f_nonempty: bool  # some opposite x in (x_i - q, x_i - 1 + q)


@dataclass(frozen=True)
class AppendState:
    append: tuple
    p: tuple
    p_prime: tuple
    last_r: tuple
    last_b: tuple
    req_r: tuple
    req_b: tuple


# ---------------------------------------------------------------------------
# Checks shared by the procedures.


def _require_two_unit(instance: Instance):
    if instance.k != 2:
        raise KNotTwo(f"decision needs k = 2, got k = {instance.k}")
    if not instance.is_unit:
        raise NotUnit("decision procedures need unit-length intervals")


def _q_in(q, lo, hi, name):
    q = as_rational(q)
    if not ((lo is None or q > lo) and (hi is None or q <= hi)):
        lo_s = "-inf" if lo is None else str(lo)
        hi_s = "inf" if hi is None else str(hi)
        raise OutOfRange(f"{name} handles q in ({lo_s}, {hi_s}], got {q}")
    return q


def _check_witness(frame: _Frame, R, what: str):
    """Containment and separation on the integer witness; raises on failure."""
    X, C, U, Q = frame.X, frame.C, frame.U, frame.Q
    if len(R) == 0:
        return
    if np.any(R < X) or np.any(R > X + U):
        raise DecisionInconsistency(f"{what}: representative outside its interval")
    order = np.argsort(R, kind="mergesort")
    Rs = R[order]
    Cs = C[order]
    # Closest opposite pair is adjacent after collapsing same-color runs.
    change = np.nonzero(Cs[1:] != Cs[:-1])[0]
    if change.size and np.any(Rs[change + 1] - Rs[change] < Q):
        raise DecisionInconsistency(f"{what}: separation violated")


def _check_leftmost(frame: _Frame, R, what: str):
    X, C, Q = frame.X, frame.C, frame.Q
    red = set(int(v) for v, c in zip(R, C) if c == 0)
    blue = set(int(v) for v, c in zip(R, C) if c == 1)
    for x, r, c in zip(X, R, C):
        other = blue if c == 0 else red
        if r != x and int(r - Q) not in other:
            raise DecisionInconsistency(f"{what}: point {r} is not leftmost")


def _finish(frame, R, branch, q):
    R = frame.K.make_leftmost(frame.X, frame.C, R, frame.Q)
    _check_witness(frame, R, branch)
    if audit_enabled():
        _check_leftmost(frame, R, branch)
    return DecisionOutcome(True, branch, q, frame, R)


# ---------------------------------------------------------------------------
# Dispatcher.


def decide(instance: Instance, q, memo: "PartMemo | None" = None) -> DecisionOutcome:
    """Is there a realization with every red-blue pair at distance >= q?

    Passing the same :class:`PartMemo` to a series of calls on one instance
    lets low-range calls skip parts whose answer is already implied by an
    earlier call.  A Yes found that way builds its realization on demand.
    """
    q = as_rational(q)
    if q <= 0:
        raise LmcsiError(f"q must be positive, got {q}")
    _require_two_unit(instance)
    if q <= HALF:
        BRANCH_COUNTS["half"] += 1
        frame = _Frame(instance, q)
        R = frame.K.half_grid(frame.X, frame.C, frame.U)
        return _finish(frame, R, "half", q)
    if q <= THREE_QUARTERS:
        BRANCH_COUNTS["low"] += 1
        return _run_low(instance, q, memo)
    if q <= 1:
        BRANCH_COUNTS["mid"] += 1
        return _run_mid(instance, q)
    BRANCH_COUNTS["high"] += 1
    return _run_high(instance, q)


# ---------------------------------------------------------------------------
# q > 1.


def _run_high(instance, q):
    frame = _Frame(instance, q)
    ok, R = frame.K.decide_high_kernel(frame.X, frame.C, frame.U, frame.Q, frame.parts())
    if not ok:
        return DecisionOutcome(False, "high", q)
    return _finish(frame, R, "high", q)


def decide_high(instance: Instance, q) -> DecisionOutcome:
    """Greedy decision for ``q > 1``.

    Points can be assumed to appear in the order of their intervals, so each
    one goes to its left endpoint or ``q`` past the last point of the other
    color, whichever is larger.  Valid for every ``q > 1``, including
    ``q > 2``.
    """
    q = _q_in(q, 1, None, "decide_high")
    _require_two_unit(instance)
    return _run_high(instance, q)


# ---------------------------------------------------------------------------
# q in (3/4, 1].


def components_H(instance: Instance, q) -> list:
    """Components of the graph joining red and blue intervals overlapping by >= q.

    Components come sorted by the left end of their span.
    """
    q = _q_in(q, THREE_QUARTERS, 1, "components_H")
    _require_two_unit(instance)
    frame = _Frame(instance, q)
    label, nc = frame.K.components_h_kernel(frame.X, frame.C, frame.U, frame.Q)
    groups = [[] for _ in range(int(nc))]
    for i, c in enumerate(label):
        groups[int(c)].append(i)
    out = []
    for g in groups:
        out.append(ComponentH(tuple(g), (instance.lefts[g[0]],
                                         max(instance.rights[j] for j in g))))
    if audit_enabled():
        _audit_components(instance, q, out)
    return out


def _audit_components(instance, q, comps):
    # Consecutive same-color members are at most 2 - 2q apart.
    for comp in comps:
        for color in (0, 1):
            xs = [instance.lefts[j] for j in comp.members if instance.colors[j] == color]
            for a, b in zip(xs, xs[1:]):
                if b - a > 2 - 2 * q:
                    raise DecisionInconsistency("component spacing bound violated")


def subrep(instance: Instance, q, component, c: int, c_prime: int, x):
    """Leftmost placement of a component whose rightmost point has color ``c``.

    The previous component ends with a point of color ``c_prime`` at ``x``
    (``math.inf`` stands for "no valid previous placement").  Points of the
    other color come first, then those of color ``c``.  Returns a dict
    ``{index: position}`` or None when some point would leave its interval.
    """
    q = as_rational(q)
    if x == math.inf:
        return None
    x = as_rational(x)
    members = component.members if isinstance(component, ComponentH) else tuple(component)
    K = pure_copy(_kernels)
    X = np.array(instance.lefts, dtype=object)
    C = np.array(instance.colors, dtype=np.int64)
    R = np.empty(len(instance), dtype=object)
    mem = np.array(members, dtype=np.int64)
    ok, _ = K._subrep(X, C, Fraction(1), q, mem, 0, len(mem), c, c_prime, x, True, R)
    if not ok:
        return None
    return {j: R[j] for j in members}


def _run_mid(instance, q):
    frame = _Frame(instance, q)
    if audit_enabled():
        components_H(instance, q)
    ok, R = frame.K.decide_mid_kernel(frame.X, frame.C, frame.U, frame.Q, frame.parts())
    if not ok:
        return DecisionOutcome(False, "mid", q)
    return _finish(frame, R, "mid", q)


def decide_mid(instance: Instance, q) -> DecisionOutcome:
    """Dynamic program over components for ``q in (3/4, 1]``.

    Within a component the points switch color exactly once, and points of
    later components never precede those of earlier ones.  For each
    component the program keeps the leftmost placement ending in red and
    the one ending in blue.
    """
    q = _q_in(q, THREE_QUARTERS, 1, "decide_mid")
    _require_two_unit(instance)
    return _run_mid(instance, q)


# ---------------------------------------------------------------------------
# q in (1/2, 3/4].


def forbidden(instance: Instance, q, color: int, x) -> bool:
    """True iff an interval of the other color has its left end in (x - q, x + q - 1).

    A point there would cut that interval into two pieces shorter than q.
    """
    q = as_rational(q)
    x = as_rational(x)
    lefts = [l for l, c in zip(instance.lefts, instance.colors) if c != color]
    a = bisect.bisect_right(lefts, x - q)
    return a < len(lefts) and lefts[a] < x + q - 1


def _low_tables(instance, q):
    frame = _Frame(instance, q)
    ok, *tables = frame.K.low_tables_kernel(frame.X, frame.C, frame.U, frame.Q, frame.parts())
    if not ok:
        raise DecisionInconsistency("ray shooting missed an unusable position")
    return frame, tables


def family_pointers(instance: Instance, q) -> list:
    """Per interval: the left-context pointers used by the low-range procedure."""
    q = _q_in(q, HALF, THREE_QUARTERS, "family_pointers")
    _require_two_unit(instance)
    _, (s_lt, o_ll, o_l, o_f, *_rest) = _low_tables(instance, q)
    return [FamilyPointers(int(a), int(b), int(c), bool(d))
            for a, b, c, d in zip(o_l, s_lt, o_ll, o_f)]


def _tabular_record(instance, q, k, steps) -> MaximalTabular:
    """Record for the run of ``steps`` q-steps starting at ``x_k``."""
    x = instance.lefts[k] + steps * q
    ck = instance.colors[k]
    cx = ck if steps % 2 == 0 else 1 - ck

    def rightmost(color, pos):
        best = -1
        for j, (l, c) in enumerate(zip(instance.lefts, instance.colors)):
            if c == color and l <= pos:
                best = j
        return best

    mx = {cx: rightmost(cx, x), 1 - cx: rightmost(1 - cx, x - q) if steps >= 1 else -1}
    return MaximalTabular(k, ck, steps, x, mx[0], mx[1])


def maximal_tabular(instance: Instance, q, i: int) -> MaximalTabular | None:
    """The longest alternating q-step run starting at ``x_i``, or None if empty.

    Uses the ray-shooting tables of the low-range procedure; the run is
    computed within the gap-free part containing ``i``.
    """
    q = _q_in(q, HALF, THREE_QUARTERS, "maximal_tabular")
    _require_two_unit(instance)
    frame, (_s, _ol, _o, _f, nu, mx0, mx1) = _low_tables(instance, q)
    if nu[i] < 0:
        return None
    steps = int(nu[i])
    return MaximalTabular(i, instance.colors[i], steps,
                          instance.lefts[i] + steps * q, int(mx0[i]), int(mx1[i]))


def longest_compatible(instance: Instance, q, M_k: MaximalTabular,
                       M_i: MaximalTabular) -> MaximalTabular | None:
    """Longest prefix of ``M_k`` that can precede ``M_i``; None if empty.

    A prefix qualifies when it ends left of ``x_i`` and each of its points is
    at least ``q`` from every point of the other color in ``M_i``.
    """
    q = as_rational(q)
    k, i = M_k.start_index, M_i.start_index
    frame = _Frame(instance, q)
    L = int(frame.K.longest_compatible_steps(frame.X, frame.C, frame.Q, M_k.steps, k, i))
    if L < 0:
        return None
    return _tabular_record(instance, q, k, L)


def _simulate_steps(instance, q, i, lo, hi):
    """Steps of M[i] by walking positions directly (audit reference)."""
    lefts, colors = instance.lefts, instance.colors
    idx = range(lo, hi)

    def bad(pos, color):
        covered = any(colors[j] == color and lefts[j] <= pos <= lefts[j] + 1 for j in idx)
        forb = any(colors[j] != color and pos - q < lefts[j] < pos + q - 1 for j in idx)
        return not covered or forb

    if bad(lefts[i], colors[i]):
        return -1
    t = 0
    while True:
        nxt = lefts[i] + (t + 1) * q
        c = colors[i] if (t + 1) % 2 == 0 else 1 - colors[i]
        if bad(nxt, c):
            return t
        t += 1


def _audit_low(instance, q, frame, tables):
    nu = tables[4]
    starts = [int(s) for s in frame.parts()]
    for lo, hi in zip(starts, starts[1:]):
        for i in range(lo, hi):
            want = _simulate_steps(instance, q, i, lo, hi)
            if want != int(nu[i]):
                raise DecisionInconsistency(
                    f"maximal run from {i}: tables say {int(nu[i])}, direct walk {want}")


def append_state(instance: Instance, q) -> AppendState:
    """Per-interval append flags, predecessors and coverage indices (global indices).

    The scan stops at the first interval that completes a solution, so
    entries after it keep their initial values.
    """
    q = _q_in(q, HALF, THREE_QUARTERS, "append_state")
    _require_two_unit(instance)
    frame = _Frame(instance, q)
    starts = [int(s) for s in frame.parts()]
    cols = [[] for _ in range(7)]
    for lo, hi in zip(starts, starts[1:]):
        status, append, _via, p, pp, l0, l1, r0, r1 = frame.K.low_state_kernel(
            frame.X, frame.C, frame.U, frame.Q, lo, hi)
        cols[0].extend(bool(a) for a in append)
        for col, arr in zip(cols[1:], (p, pp, l0, l1, r0, r1)):
            col.extend(int(v) + lo if v >= 0 else -1 for v in arr)
    return AppendState(*(tuple(c) for c in cols))


def _run_low(instance, q, memo=None):
    frame = _Frame(instance, q)
    audit = audit_enabled()
    if audit:
        _, tables = _low_tables(instance, q)
        _audit_low(instance, q, frame, tables)
    if memo is not None and not audit:
        return _run_low_memo(frame, instance, q, memo)
    status, R = frame.K.decide_low_kernel(frame.X, frame.C, frame.U, frame.Q, frame.parts())
    if status < 0:
        raise DecisionInconsistency(f"low-range scan failed internally (code {status})")
    if status == 0:
        return DecisionOutcome(False, "low", q)
    return _finish(frame, R, "low", q)


def _run_low_memo(frame, instance, q, memo):
    starts = frame.parts()
    yes, no = memo.align(starts)
    qf = float(q)
    known_no = np.nonzero(no < qf)[0]
    if known_no.size:
        return DecisionOutcome(False, "low", q, blocked_at=int(starts[known_no[0]]))
    st = frame.K.low_parts_kernel(frame.X, frame.C, frame.U, frame.Q, starts, ~(yes > qf))
    if np.any(st < 0):
        raise DecisionInconsistency(f"low-range scan failed internally (code {st.min()})")
    yes[st == 1] = np.maximum(yes[st == 1], qf)
    no[st == 0] = np.minimum(no[st == 0], qf)
    failed = np.nonzero(st == 0)[0]
    if failed.size:
        return DecisionOutcome(False, "low", q, blocked_at=int(starts[failed[0]]))
    return DecisionOutcome(True, "low", q, source=instance)


def decide_low(instance: Instance, q) -> DecisionOutcome:
    """Decision for ``q in (1/2, 3/4]`` by chaining maximal tabular runs.

    A run is appendable when some earlier appendable run can precede it;
    the answer is Yes once an appendable run reaches the last interval.
    """
    q = _q_in(q, HALF, THREE_QUARTERS, "decide_low")
    _require_two_unit(instance)
    return _run_low(instance, q)
