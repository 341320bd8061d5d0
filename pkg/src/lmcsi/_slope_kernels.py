"""Merge-sort kernels behind slope counting and slope selection.

A slope bound is turned into a permutation of the points (their order along
a line of that slope); the pairs whose relative order differs between two
such permutations are exactly the pairs whose slope lies between the bounds.
"""

import numpy as np

from ._jit import kernel


@kernel
def count_inversions(seq):
    """Pairs ``t < u`` with ``seq[t] > seq[u]`` for distinct int64 values."""
    n = seq.shape[0]
    a = seq.copy()
    b = np.empty(n, np.int64)
    total = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, o = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    total += mid - i
                    b[o] = a[j]
                    j += 1
                else:
                    b[o] = a[i]
                    i += 1
                o += 1
            while i < mid:
                b[o] = a[i]
                i += 1
                o += 1
            while j < hi:
                b[o] = a[j]
                j += 1
                o += 1
            lo = hi
        a, b = b, a
        width *= 2
    return total


@kernel
def inversion_pairs(seq, targets):
    """Inversions of ``seq`` with the given ranks, as (larger, smaller) values.

    Inversions are ranked in the order a bottom-up merge sort meets them;
    ``targets`` must be sorted.  Every inversion is found when an element of
    a right run overtakes the rest of a left run, so each block of ranks
    maps onto a contiguous slice of that left run.
    """
    n = seq.shape[0]
    m = targets.shape[0]
    big = np.empty(m, np.int64)
    small = np.empty(m, np.int64)
    a = seq.copy()
    b = np.empty(n, np.int64)
    seen = 0
    t = 0
    width = 1
    while width < n and t < m:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, o = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    cnt = mid - i
                    while t < m and targets[t] < seen + cnt:
                        big[t] = a[i + targets[t] - seen]
                        small[t] = a[j]
                        t += 1
                    seen += cnt
                    b[o] = a[j]
                    j += 1
                else:
                    b[o] = a[i]
                    i += 1
                o += 1
            while i < mid:
                b[o] = a[i]
                i += 1
                o += 1
            while j < hi:
                b[o] = a[j]
                j += 1
                o += 1
            lo = hi
        a, b = b, a
        width *= 2
    return big[:t], small[:t]


@kernel
def fraction_argsort(num, den):
    """Stable argsort of ``num / den`` (all ``den > 0``) by cross-multiplying."""
    n = num.shape[0]
    a = np.arange(n)
    b = np.empty(n, np.int64)
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, o = lo, mid, lo
            while i < mid and j < hi:
                if num[a[j]] * den[a[i]] < num[a[i]] * den[a[j]]:
                    b[o] = a[j]
                    j += 1
                else:
                    b[o] = a[i]
                    i += 1
                o += 1
            while i < mid:
                b[o] = a[i]
                i += 1
                o += 1
            while j < hi:
                b[o] = a[j]
                j += 1
                o += 1
            lo = hi
        a, b = b, a
        width *= 2
    return a


@kernel
def repair_fraction_order(num, den, o):
    """Insertion sort of ``o`` by exact ``num / den``.

    Meant for an order that is already sorted up to rounding, where only
    nearly equal values can be out of place, so each element moves a
    short distance.
    """
    o = o.copy()
    for i in range(1, o.shape[0]):
        cur = o[i]
        j = i
        while j > 0 and num[cur] * den[o[j - 1]] < num[o[j - 1]] * den[cur]:
            o[j] = o[j - 1]
            j -= 1
        o[j] = cur
    return o
