"""Time the two-color optimizer on growing random instances.

Run with ``python3 demos/scaling.py [sizes...]``; the default sizes go up to
100000 intervals.  Each size is timed on a few seeds to smooth out the
instance-to-instance variation in the number of decision calls.
"""

import sys
import time

from lmcsi.generators import two_color_overlap
from lmcsi.optimize import optimize

sizes = [int(a) for a in sys.argv[1:]] or [6_250, 25_000, 100_000]
seeds = (1, 2, 3)

optimize(two_color_overlap(2_000, 0))  # compile or load the kernels
prev = None
for n in sizes:
    total = 0.0
    for seed in seeds:
        inst = two_color_overlap(n, seed)
        t0 = time.perf_counter()
        res = optimize(inst)
        total += time.perf_counter() - t0
    growth = "" if prev is None else f"  x{total / prev:.2f} vs previous size"
    print(f"n = {n:>7}: {total / len(seeds):6.2f}s per instance (last q* = {res.q_star}){growth}")
    prev = total
