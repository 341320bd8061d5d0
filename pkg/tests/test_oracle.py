from fractions import Fraction as F

import pytest

from conftest import make
from lmcsi.core import Realization, separation_ok
from lmcsi.generators import two_color_overlap
from lmcsi.oracle import (BudgetExceeded, OracleBudget, candidate_positions, candidate_values,
                          oracle_decide, oracle_optimize, oracle_witness)

LOWER = make((0, 0), ("1/2", 0), (1, 0), ("1/2", 1))


def test_decide_examples():
    assert oracle_decide(make((0, 0), (1, 1)), 2)
    assert not oracle_decide(LOWER, F(4, 5))
    assert oracle_decide(LOWER, F(1, 2))


def test_optimize_examples():
    assert oracle_optimize(make((0, 0), (1, 1))) == 2
    assert oracle_optimize(make((0, 0), (0, 1))) == 1
    assert oracle_optimize(make((0, 0), (2, 1), (4, 0))) == F(5, 2)
    assert oracle_optimize(LOWER) == F(3, 4)


def test_witness_is_valid():
    inst = make((0, 0), ("1/4", 1), ("1/2", 0), (1, 1))
    q = oracle_optimize(inst)
    reps = oracle_witness(inst, q)
    assert separation_ok(inst, Realization(reps), q)
    assert oracle_witness(inst, q + F(1, 100)) is None


def test_candidate_positions_stay_inside():
    inst = make((0, 0), ("1/3", 1), (1, 0))
    for i in range(3):
        for p in candidate_positions(inst, F(2, 3), i):
            assert inst[i].contains(p)


def test_candidates_cover_the_two_extremes():
    vals = candidate_values(make((0, 0), (1, 1)))
    assert 2 in vals and F(1, 2) in vals


def test_budget():
    big = two_color_overlap(9, 0)
    with pytest.raises(BudgetExceeded):
        oracle_decide(big, 1)
    with pytest.raises(BudgetExceeded):
        oracle_optimize(big)
    assert oracle_decide(big, F(1, 2), OracleBudget(max_n=9))


@pytest.mark.parametrize("seed", range(20))
def test_monotone_and_symmetric(seed):
    inst = two_color_overlap(5, seed, den=4, width=3)
    q_star = oracle_optimize(inst)
    assert oracle_decide(inst, q_star)
    above = [v for v in candidate_values(inst) if v > q_star]
    if above:
        assert not oracle_decide(inst, above[0])
    mirrored = make(*[(10 - iv.left, iv.color) for iv in inst])
    shifted = make(*[(iv.left + F(7, 3), iv.color) for iv in inst])
    assert oracle_optimize(mirrored) == q_star == oracle_optimize(shifted)
