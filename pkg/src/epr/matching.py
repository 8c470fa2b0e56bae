"""Maximum-weight assignment on dense square matrices.

Two routes share one interface: an exact Hungarian solver over Python
integers (floats are dyadic rationals, so instances scale losslessly to
integers) for matrices up to EXACT_SIZE_CAP, and scipy's float LAP solver
above that. The exact route makes downstream half-integral values exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

EXACT_SIZE_CAP = 128


def scale_to_integers(values: Sequence[float]) -> tuple[list[int], int]:
    """Represent floats exactly as integers over one common denominator."""
    fracs = [Fraction(v) for v in values]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    return [int(f * denom) for f in fracs], denom


def _hungarian_min(cost: list[list[int]]) -> list[int]:
    """O(n^3) Hungarian method with potentials; returns row matched to each column.

    Minimizes total cost of a perfect assignment on a square integer matrix.
    Arrays are 1-indexed with column 0 as the scratch slot.
    """
    n = len(cost)
    INF = math.inf
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row currently assigned to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0, delta, j1 = p[j0], INF, 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return p


def max_weight_assignment(
    gain: Sequence[Sequence[float]],
) -> tuple[Fraction | float, list[int], bool]:
    """Maximum-weight perfect assignment on a square gain matrix.

    Returns (total gain, permutation sigma with sigma[row] = column, exact).
    The integer route reports exact=True and returns the total as an exact
    Fraction; the float route re-accumulates it from the chosen entries.
    """
    n = len(gain)
    if n == 0:
        return Fraction(0), [], True
    if any(len(row) != n for row in gain):
        raise ValueError("gain matrix must be square")
    if n <= EXACT_SIZE_CAP:
        flat, denom = scale_to_integers([x for row in gain for x in row])
        cost = [[-flat[i * n + j] for j in range(n)] for i in range(n)]
        p = _hungarian_min(cost)
        sigma = [0] * n
        for j in range(1, n + 1):
            sigma[p[j] - 1] = j - 1
        total = Fraction(sum(flat[i * n + sigma[i]] for i in range(n)), denom)
        return total, sigma, True
    rows, cols = linear_sum_assignment(np.asarray(gain, dtype=float), maximize=True)
    sigma = [0] * n
    for r, c in zip(rows, cols):
        sigma[r] = int(c)
    total = float(sum(gain[i][sigma[i]] for i in range(n)))
    return total, sigma, False
