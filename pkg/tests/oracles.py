"""Reference computations that share no code with the package.

Golden-ratio values are evaluated with 80-digit decimals, and window tests
use integer inequalities derived by hand, so that agreement with the
library's own exact arithmetic is meaningful.
"""
from decimal import Decimal, getcontext

import numpy as np

getcontext().prec = 80
SQRT5 = Decimal(5).sqrt()
TAU_D = (1 + SQRT5) / 2
TAU_CONJ_D = (1 - SQRT5) / 2


def phys_dec(m, n):
    return Decimal(int(m)) + Decimal(int(n)) * TAU_D


def star_dec(m, n):
    return Decimal(int(m)) + Decimal(int(n)) * TAU_CONJ_D


def fibonacci_substitution_points(length_cap):
    """Left endpoints (as (m, n) with value m + n*tau) of the a->ab, b->a tiling, a = tau, b = 1."""
    word = "a"
    while True:
        total = word.count("a") * TAU_D + word.count("b")
        if total > length_cap + 3:
            break
        word = "".join("ab" if c == "a" else "a" for c in word)
    pts, m, n = [], 0, 0
    for c in word:
        if phys_dec(m, n) > length_cap:
            break
        pts.append((m, n))
        if c == "a":
            n += 1
        else:
            m += 1
    return pts


def in_fib_window(p, q):
    """Integer test of -1 <= p + q*tau' < tau - 1 for integer arrays p, q.

    With tau' = (1 - r)/2 and r = sqrt 5:
      p + q tau' >= -1     <=>  (2p + q + 2) >= q r
      p + q tau' <  tau-1  <=>  (2p + q + 1) <  (q + 1) r
    and for integers u, v:  u >= v r  iff  (v <= 0 and (u >= 0 or u*u <= 5 v*v)) or (v > 0 and u > 0 and u*u >= 5 v*v).
    """
    p, q = np.asarray(p), np.asarray(q)
    small = p.dtype.kind == q.dtype.kind == "i" and max(np.abs(p).max(initial=0), np.abs(q).max(initial=0)) < 10**8
    if not small:                # squares below would overflow int64
        p, q = p.astype(object), q.astype(object)

    def ge(u, v):  # u >= v*sqrt5
        return np.where(v <= 0, (u >= 0) | (u * u <= 5 * v * v), (u > 0) & (u * u >= 5 * v * v))

    lower = ge(2 * p + q + 2, q).astype(bool)
    upper = ~ge(2 * p + q + 1, q + 1).astype(bool)
    return lower & upper


def has_mono_kap(colors, k):
    n = len(colors)
    for s in range(n):
        for d in range(1, n):
            idx = [s + j * d for j in range(k)]
            if idx[-1] >= n:
                break
            if len({colors[i] for i in idx}) == 1:
                return True
    return False


def min_residual_cubic(values):
    vals = sorted(values)
    best = None
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            for k in range(j + 1, len(vals)):
                r = abs(2 * vals[j] - vals[i] - vals[k])
                if best is None or r < best:
                    best = r
    return best
