import random
from fractions import Fraction as F

import pytest

from conftest import make
from lmcsi.core import ColoredInterval, MissingColor, Realization, inside, mcsi_length, validate
from lmcsi.disjoint import (UNBOUNDED, CombinatorialMCSI, EmptyList, NotSemiDisjoint,
                            build_chains, minimal_csis, ordered_dispersion,
                            reduce_semi_disjoint, solve_disjoint, solve_semi_disjoint)
from lmcsi.generators import disjoint, semi_disjoint
from lmcsi.oracle import _minimal_windows_bruteforce, oracle_optimize

W = CombinatorialMCSI


def test_minimal_windows_examples():
    assert minimal_csis(make((0, 0), (2, 1), (4, 0))) == [W(0, 1), W(1, 2)]
    assert minimal_csis(make((0, 0), (2, 1))) == [W(0, 1)]


def test_missing_color():
    inst = validate([(0, 0), (2, 0)], 1)
    object.__setattr__(inst, "k", 2)
    with pytest.raises(MissingColor):
        minimal_csis(inst)


@pytest.mark.parametrize("seed", range(30))
def test_minimal_windows_match_brute_force(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    colors = list(range(k)) + [rng.randrange(k) for _ in range(rng.randint(0, 10))]
    rng.shuffle(colors)
    inst = validate([(2 * i, c) for i, c in enumerate(colors)], k)
    got = [tuple(w) for w in minimal_csis(inst)]
    assert got == sorted(_minimal_windows_bruteforce(colors, k))


def test_chains_examples():
    (one,) = build_chains([W(0, 1), W(1, 2)])
    assert one.boundary == (0, 1, 2)
    assert len(build_chains([W(0, 2), W(3, 5)])) == 2


def test_chain_diagram_with_three_chains():
    # Six windows chained as {1st, 4th, 6th}, {2nd, 5th}, {3rd}.
    colors = [3, 0, 2, 1, 3, 0, 2, 1, 0, 3]
    inst = validate([(2 * i, c) for i, c in enumerate(colors)], 4)
    windows = minimal_csis(inst)
    assert len(windows) == 6
    parts = sorted(sorted(windows.index(w) for w in ch.windows) for ch in build_chains(windows))
    assert parts == [[0, 3, 5], [1, 4], [2]]


def test_ordered_dispersion_examples():
    assert ordered_dispersion([(0, 1), (2, 3), (4, 5)]) == (F(5, 2), [0, F(5, 2), 5])
    assert ordered_dispersion([(0, 1)]) == (UNBOUNDED, [0])
    assert ordered_dispersion([(0, 1), (0, 1)]) == (1, [0, 1])
    with pytest.raises(EmptyList):
        ordered_dispersion([])


@pytest.mark.parametrize("seed", range(40))
def test_ordered_dispersion_matches_all_pairs(seed):
    rng = random.Random(seed)
    segs, x = [], 0
    for _ in range(rng.randint(2, 12)):
        x += F(rng.randint(0, 6), 3)
        segs.append((x, x + F(rng.randint(0, 6), 2)))
    want = min((segs[i][1] - segs[a][0]) / (i - a)
               for i in range(len(segs)) for a in range(i))
    g, reps = ordered_dispersion(segs)
    assert g == want
    assert all(lo <= r <= hi for r, (lo, hi) in zip(reps, segs))
    assert min(b - a for a, b in zip(reps, reps[1:])) >= g


def test_solve_disjoint_examples():
    assert solve_disjoint(make((0, 0), (2, 1), (4, 0))).q_star == F(5, 2)
    res = solve_disjoint(make((0, 0), (2, 1)))
    assert res.q_star == 3 and res.realization.reps == (0, 3)
    inst = validate([ColoredInterval(F(0), F(2), 0), ColoredInterval(F(3), F(1), 1)], 2)
    res = solve_disjoint(inst)
    assert res.q_star == 4 and res.realization.reps == (0, 4)


def test_single_color_is_zero():
    assert solve_disjoint(make((0, 0), (3, 0), k=1)).q_star == 0


def test_reduce_examples():
    red, _ = reduce_semi_disjoint(make((0, 0), ("1/2", 0), ("9/10", 0), (3, 1)))
    assert [(iv.left, iv.right, iv.color) for iv in red] == [(F(9, 10), 1, 0), (3, 4, 1)]
    red, _ = reduce_semi_disjoint(make((0, 0), ("4/5", 0), ("8/5", 0), (3, 1)))
    assert [(iv.left, iv.color) for iv in red] == [(0, 0), (F(8, 5), 0), (3, 1)]
    with pytest.raises(NotSemiDisjoint):
        reduce_semi_disjoint(make((0, 0), ("1/2", 1)))


def test_solve_semi_disjoint_examples():
    res = solve_semi_disjoint(make((0, 0), ("1/2", 0), (3, 1)))
    assert res.q_star == F(7, 2) and res.realization.reps == (F(1, 2), F(1, 2), 4)
    assert solve_semi_disjoint(make((0, 0), ("1/5", 0), (2, 1))).q_star == F(14, 5)
    inst = make((0, 0), (2, 1), (4, 0))
    assert solve_semi_disjoint(inst).q_star == solve_disjoint(inst).q_star


@pytest.mark.parametrize("seed", range(60))
def test_random_against_oracle(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 4)
    n = rng.randint(k, 7)
    for inst, solver in ((disjoint(n, k, seed), solve_disjoint),
                         (semi_disjoint(n, k, seed), solve_semi_disjoint)):
        res = solver(inst)
        assert res.q_star == oracle_optimize(inst)
        assert inside(inst, res.realization.reps)
        assert mcsi_length(inst, Realization(res.realization.reps)) == res.q_star
