"""A short tour: solve a few small instances and check the answers.

Run with ``python3 demos/walkthrough.py``.
"""

from fractions import Fraction

from lmcsi.core import format_rational, mcsi_length, validate
from lmcsi.decision import decide
from lmcsi.optimize import solve
from lmcsi.oracle import oracle_optimize


def show(title, raw, k):
    inst = validate(raw, k)
    res = solve(inst)
    reps = ", ".join(format_rational(r) for r in inst.to_input_order(res.realization.reps))
    print(f"{title}\n  q* = {format_rational(res.q_star)} via {res.method}; points: {reps}")
    if len(inst) <= 8:
        print(f"  brute force agrees: {oracle_optimize(inst) == res.q_star}")
    print(f"  measured spanning length: {format_rational(mcsi_length(inst, res.realization))}")
    return inst, res


# Two unit intervals touching at one point: the points can be pushed 2 apart.
show("red [0,1], blue [1,2]", [(0, 0), (1, 1)], 2)

# Reds at 0, 1/2, 1 around a blue at 1/2: crowded, so the best spacing is 3/4.
inst, res = show("reds at 0, 1/2, 1 and a blue at 1/2",
                 [(0, 0), (Fraction(1, 2), 0), (1, 0), (Fraction(1, 2), 1)], 2)
for q in (Fraction(3, 4), Fraction(3, 4) + Fraction(1, 1000)):
    print(f"  decide(q = {format_rational(q)}): {'YES' if decide(inst, q) else 'NO'}")

# Three colors, no overlaps between colors: the linear-time path handles any k.
show("three colors, separated", [(0, 0), (2, 1), (4, 2), (6, 0), (Fraction(17, 2), 1)], 3)
