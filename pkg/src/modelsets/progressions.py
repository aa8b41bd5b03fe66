"""Arithmetic progressions in model sets: search, constructive windows, radius bounds."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cps import (
    GuardExceeded,
    covering_radius_estimate,
    enumerate_model_set,
    is_member,
    star,
    window_interval,
)
from .pointset import CpsDescriptor, PointSet
from .quadratic import GOLDEN, TAU, QuadElem
from .windows import Ball, Interval, Window

__all__ = [
    "Progression",
    "DifferenceWindow",
    "verify_ap",
    "find_aps_bruteforce",
    "difference_window",
    "constructive_ap",
    "punctured_covering_radius",
    "punctured_radius_bound",
    "bounded_gap_radius",
    "bounded_gap_ap",
    "split_window",
    "fact_r1_radius",
    "fibonacci_gap_radius",
    "nearest_nonzero",
    "STANDARD_FIBONACCI_WINDOW",
]

STANDARD_FIBONACCI_WINDOW = Interval(-1, TAU - 1)


# -- point arithmetic over the representations PointSet hands out --------------

def _add(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _sub(a, b):
    if isinstance(a, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return a - b


def _mul(j: int, a):
    if isinstance(a, tuple):
        return tuple(j * x for x in a)
    return j * a


def _is_zero(a) -> bool:
    if isinstance(a, tuple):
        return all(x == 0 for x in a)
    return a == 0


def _is_exact(a) -> bool:
    if isinstance(a, tuple):
        return all(_is_exact(x) for x in a)
    return isinstance(a, (QuadElem, int, Fraction, np.integer)) and not isinstance(a, bool)


def _as_float_vec(a) -> np.ndarray:
    if isinstance(a, tuple):
        return np.array([float(x) for x in a])
    return np.array([float(a)])


@dataclass(frozen=True)
class Progression:
    """``start + j*diff`` for ``0 <= j < length``.

    ``witness`` is the difference window the step was drawn from, when the
    progression was built constructively.
    """

    start: object
    diff: object
    length: int
    witness: Window | None = None
    cps: CpsDescriptor | None = None

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("a progression has at least two terms")
        if _is_zero(self.diff):
            raise ValueError("progression step must be nonzero")

    def terms(self) -> list:
        return [_add(self.start, _mul(j, self.diff)) for j in range(self.length)]

    def terms_phys(self) -> np.ndarray:
        """Float physical coordinates of the terms, shape ``(length, d)``."""
        out = []
        for term in self.terms():
            if self.cps is not None and self.cps.ring is None:
                out.append(self.cps.phys_of(np.array(term))[0])
            else:
                out.append(_as_float_vec(term))
        return np.array(out)

    def is_member_termwise(self, cps: CpsDescriptor, window: Window) -> bool:
        return all(is_member(cps, window, x) for x in self.terms())

    def to_record(self) -> dict:
        def enc(x):
            if isinstance(x, QuadElem):
                return {"m": x.m, "n": x.n}
            if isinstance(x, tuple):
                return [int(v) if _is_exact(v) else float(v) for v in x]
            return x if isinstance(x, int) else float(x)

        return {
            "s": enc(self.start),
            "t": enc(self.diff),
            "k": self.length,
            "phys_terms": [float(v) for v in self.terms_phys()[:, 0]] if self.terms_phys().shape[1] == 1
            else self.terms_phys().tolist(),
        }


def verify_ap(seq, tol: float = 0.0) -> bool:
    """True iff ``seq`` has equal, nonzero consecutive differences.

    Exact elements (QuadElem, int, Fraction, integer tuples) are compared
    exactly; anything else is compared within ``tol``.
    """
    seq = list(seq)
    if len(seq) < 2:
        raise ValueError("need at least two terms")
    if all(_is_exact(x) for x in seq):
        diffs = [_sub(b, a) for a, b in zip(seq, seq[1:])]
        return not _is_zero(diffs[0]) and all(d == diffs[0] for d in diffs)
    arr = np.array([_as_float_vec(x) for x in seq])
    diffs = np.diff(arr, axis=0)
    if np.linalg.norm(diffs[0]) <= tol:
        return False
    return bool(np.all(np.abs(diffs - diffs[0]) <= tol))


def find_aps_bruteforce(ps: PointSet, k: int, max_points: int = 100_000,
                        limit: int | None = None, tol: float = 1e-9) -> list[Progression]:
    """Every maximal progression of length ``>= k`` inside the fragment.

    Pair expansion over ordered pairs ``(s, s + t)``: a pair is kept only
    when ``s - t`` is absent (so ``s`` starts a maximal run), then extended
    while the next term is present.  Output is sorted by start, then step.
    Sets with exact coordinates use exact membership; float-only sets (1-D)
    match within ``tol``.  ``limit`` stops after that many hits.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n = len(ps)
    if n > max_points:
        raise GuardExceeded(f"{n} points exceeds the brute-force guard of {max_points}")
    out: list[Progression] = []
    if n < 2:
        return out
    one_d = ps.dim == 1
    if ps.coords is not None:
        pts = [tuple(int(v) for v in row) for row in ps.coords]
        index = set(pts)
        elems = ps.elements()
        xs = ps.x if one_d else None
        xmax = float(xs[-1]) if one_d else None
        for i in range(n):
            si = pts[i]
            for j in range(i + 1, n):
                if one_d and k > 2 and xs[i] + (k - 1) * (xs[j] - xs[i]) > xmax + 1e-9:
                    break
                sj = pts[j]
                t = tuple(b - a for a, b in zip(si, sj))
                if tuple(a - b for a, b in zip(si, t)) in index:
                    continue
                length = 2
                nxt = tuple(a + b for a, b in zip(sj, t))
                while nxt in index:
                    length += 1
                    nxt = tuple(a + b for a, b in zip(nxt, t))
                if length >= k:
                    out.append(Progression(elems[i], _sub(elems[j], elems[i]), length, cps=ps.cps))
                    if limit is not None and len(out) >= limit:
                        return out
        return out
    if not one_d:
        raise ValueError("float-only brute force is implemented for one-dimensional sets")
    xs = ps.x

    def present(v: float) -> bool:
        j = np.searchsorted(xs, v)
        return (j < n and abs(xs[j] - v) <= tol) or (j > 0 and abs(xs[j - 1] - v) <= tol)

    for i in range(n):
        for j in range(i + 1, n):
            t = xs[j] - xs[i]
            if k > 2 and xs[i] + (k - 1) * t > xs[-1] + tol:
                break
            if present(xs[i] - t):
                continue
            length = 2
            while present(xs[i] + length * t):
                length += 1
            if length >= k:
                out.append(Progression(float(xs[i]), float(t), length))
                if limit is not None and len(out) >= limit:
                    return out
    return out


# -- constructive windows -------------------------------------------------------------

@dataclass(frozen=True)
class DifferenceWindow:
    """Internal-space window of steps ``t`` with ``s, s+t, ..., s+n*t`` all in the model set."""

    window: Window
    anchor: object
    n: int
    cps: CpsDescriptor
    base: Window

    def valid_differences(self, region) -> PointSet:
        """Nonzero lattice points with star in the window, inside ``region``."""
        ps = enumerate_model_set(self.cps, self.window, region)
        nz = np.any(ps.coords != 0, axis=1)
        return ps.take(nz)


def difference_window(cps: CpsDescriptor, window: Window, s, n: int) -> DifferenceWindow:
    """Window of admissible steps for progressions of ``n + 1`` terms from ``s``.

    Interval windows ``[w1, w2)`` give exactly ``[(w1 - s*)/n, (w2 - s*)/n)``
    (same end types), which characterises every admissible step.  Boxes and
    balls give the open ball of radius ``dist(s*, boundary)/n`` around 0,
    which is sufficient but not exhaustive.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if cps.ring is not None and not isinstance(s, QuadElem):
        s = QuadElem.coerce(s, cps.ring) if np.ndim(s) == 0 else cps.element(s)
    if not is_member(cps, window, s):
        raise ValueError(f"{s} is not in the model set")
    s_star = star(s, cps)
    if cps.ring is not None:
        W = window_interval(cps, window)
    elif window.dim == 1 and isinstance(window, Interval):
        W = window
        s_star = s_star[0]
    else:
        W = None
    if W is not None:
        dw = Interval((W.lo - s_star) / n, (W.hi - s_star) / n, W.closed_lo, W.closed_hi)
    else:
        r = window.distance_to_boundary(s_star)
        if not r > 0:
            raise ValueError("s* lies on the window boundary: no interior slack")
        r = r / n if not isinstance(r, float) else Fraction(repr(r / n))
        dw = Ball(tuple(0 for _ in range(window.dim)), r)
    return DifferenceWindow(dw, s, n, cps, window)


def _pick_smallest(ps: PointSet):
    """Index of the point with least |phys|, ties broken on lattice coordinates."""
    norms = np.linalg.norm(ps.phys, axis=1)
    best = norms.min()
    cand = np.flatnonzero(norms <= best + 1e-12 * max(1.0, best))
    if ps.coords is not None and len(cand) > 1:
        rows = sorted((tuple(int(v) for v in ps.coords[i]), i) for i in cand)
        if ps.cps is not None and ps.cps.ring is not None:
            # exact tie check in the ring
            vals = [abs(ps.cps.element(r)) for r, _ in rows]
            m = min(vals)
            rows = [row for row, v in zip(rows, vals) if v == m]
        return rows[0][1]
    return int(cand[0])


def _search_regions(cps: CpsDescriptor, scale: float, start: float = 1.0):
    r = max(start, 4.0 * scale)
    for _ in range(40):
        yield tuple((-r, r) for _ in range(cps.physical_dim))
        r *= 2


def nearest_nonzero(cps: CpsDescriptor, window: Window, region=None):
    """Nonzero lattice point with star in ``window`` of least |phys| (ties: lexicographic coords)."""
    regions = [region] if region is not None else _search_regions(cps, 1.0 / max(window.measure(), 1e-300))
    for reg in regions:
        ps = enumerate_model_set(cps, window, reg)
        ps = ps.take(np.any(ps.coords != 0, axis=1))
        if len(ps):
            i = _pick_smallest(ps)
            # a point of equal norm could sit just outside a non-symmetric region
            r = float(np.linalg.norm(ps.phys[i]))
            inner = all(-float(lo) >= r and float(hi) >= r for lo, hi in ps.region)
            if inner:
                return ps.elements_at([i])[0]
            if region is not None:
                return ps.elements_at([i])[0]
    raise ValueError("no nonzero point found in the search region; widen it")


def constructive_ap(cps: CpsDescriptor, window: Window, s, n: int, region=None) -> Progression:
    """An ``(n+1)``-term progression from ``s`` with a certified step.

    The step is the nonzero element of least |phys| whose star falls in the
    difference window; ties go to the lexicographically smallest lattice
    coordinates.  With ``region`` given the search is confined to it.
    """
    dw = difference_window(cps, window, s, n)
    s = dw.anchor
    try:
        t = nearest_nonzero(cps, dw.window, region)
    except ValueError:
        raise ValueError("search region contains no nonzero admissible step; widen it") from None
    return Progression(s, t, n + 1, witness=dw.window, cps=cps)


# -- relative denseness radii ---------------------------------------------------------------

def fact_r1_radius(a, b, exact: bool = False):
    """``tau**3/(b - a)``: a relative-denseness radius for the golden model set of ``(a, b)``."""
    if not a < b:
        raise ValueError("need a < b")
    if exact:
        width = QuadElem.coerce(b, GOLDEN) - QuadElem.coerce(a, GOLDEN)
        return TAU ** 3 / width
    return float(TAU ** 3) / (float(b) - float(a))


def fibonacci_gap_radius(n: int) -> QuadElem:
    """``2(n**2 + 1)tau**2`` as an exact ring element."""
    return 2 * (n * n + 1) * TAU ** 2


def _default_fragment(cps: CpsDescriptor, window: Window, scale_mult: float = 30.0):
    meas = window.measure()
    if meas <= 0:
        raise ValueError("window has empty interior")
    if cps.is_golden:
        guess = float(TAU ** 3) / meas
    else:
        guess = cps.covolume / meas ** (1.0 / cps.internal_dim)
    return max(guess, 1.0) * scale_mult, max(guess, 1.0)


def _covering_with_retry(cps, window, inner_half: float, pad: float, pitch=None, drop_zero=False):
    for _ in range(8):
        inner = tuple((-inner_half, inner_half) for _ in range(cps.physical_dim))
        outer = tuple((-inner_half - pad, inner_half + pad) for _ in range(cps.physical_dim))
        ps = enumerate_model_set(cps, window, outer)
        if drop_zero:
            ps = ps.take(np.any(ps.coords != 0, axis=1))
        if len(ps) >= 2:
            try:
                return covering_radius_estimate(ps, inner, pitch)
            except ValueError:
                pass
        pad *= 2
    raise ValueError("could not find a fragment large enough for a stable covering radius")


def punctured_covering_radius(cps: CpsDescriptor, window: Window, region=None, pitch=None) -> float:
    """Empirical covering radius of ``model_set(window) minus {0}``.

    ``window`` must contain 0 in its interior.  ``region`` is the sampled
    region (default: a symmetric box scaled to the window size).
    """
    if not window.has_interior:
        raise ValueError("window has no interior")
    zero = tuple(0 for _ in range(cps.internal_dim)) if cps.ring is None else 0
    if cps.ring is None:
        inside = window.contains_rational(zero) and window.distance_to_boundary(zero) > 0
    else:
        W = window_interval(cps, window)
        inside = W.lo < 0 < W.hi
    if not inside:
        raise ValueError("0 must lie in the interior of the window")
    half, guess = _default_fragment(cps, window)
    if region is not None:
        from .pointset import as_region

        reg = as_region(region, cps.physical_dim)
        half = max(max(abs(float(lo)), abs(float(hi))) for lo, hi in reg)
    return _covering_with_retry(cps, window, half, 4 * guess, pitch, drop_zero=True)


def punctured_radius_bound(cps: CpsDescriptor, window: Window, region=None, pitch=None):
    """``(R', y, R' + |y|)`` from the proof that a punctured model set stays relatively dense."""
    half, guess = _default_fragment(cps, window)
    R1 = _covering_with_retry(cps, window, half, 4 * guess, pitch)
    y = nearest_nonzero(cps, window)
    ny = abs(float(y)) if isinstance(y, QuadElem) else float(np.linalg.norm(cps.phys_of(np.array(y))[0]))
    return R1, y, R1 + ny


def split_window(window: Window, n: int):
    """A concrete ``(V, U)`` with ``V + n*U`` inside ``window``.

    ``V`` is the concentric half-size copy of the window and ``U`` the open
    ball about 0 of radius ``inradius/(2n)``.
    """
    if not window.has_interior:
        raise ValueError("window has empty interior")
    V = window.shrink(Fraction(1, 2))
    rho = window.inradius / (2 * n)
    if window.dim == 1:
        U = Interval(-rho, rho, False, False)
    else:
        U = Ball(tuple(0 for _ in range(window.dim)), rho)
    return V, U


def _is_standard_fibonacci(cps: CpsDescriptor, window: Window) -> bool:
    if not cps.is_golden or window.dim != 1:
        return False
    try:
        return window_interval(cps, window) == STANDARD_FIBONACCI_WINDOW
    except ValueError:
        return False


def bounded_gap_radius(cps: CpsDescriptor, window: Window, n: int, method: str = "auto",
                       pitch=None) -> float:
    """A radius ``R`` such that every ball ``B_R(x)`` holds an ``(n+1)``-term progression.

    ``method``:
      * ``"closed_form"``: ``2(n**2+1)tau**2`` (golden CPS, window ``[-1, tau-1)`` only);
      * ``"window_length"``: ``R' + n*R''`` with both radii from the ``tau**3/length``
        bound (golden CPS, any interval);
      * ``"empirical"``: ``R' + n*R''`` from sampled covering radii;
      * ``"auto"``: the first applicable of the above.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not window.has_interior:
        raise ValueError("window has empty interior")
    if method == "auto":
        if _is_standard_fibonacci(cps, window):
            method = "closed_form"
        elif cps.is_golden:
            method = "window_length"
        else:
            method = "empirical"
    if method == "closed_form":
        if not _is_standard_fibonacci(cps, window):
            raise ValueError("closed form applies to the standard Fibonacci window only")
        return float(fibonacci_gap_radius(n))
    V, U = split_window(window if cps.ring is None else window_interval(cps, window), n)
    if method == "window_length":
        if not cps.is_golden:
            raise ValueError("the tau**3/length bound is specific to the golden CPS")
        R1 = fact_r1_radius(V.lo, V.hi)
        y = nearest_nonzero(cps, U)
        R2 = fact_r1_radius(U.lo, U.hi) + abs(float(y))
        return R1 + n * R2
    if method == "empirical":
        half, guess = _default_fragment(cps, V)
        R1 = _covering_with_retry(cps, V, half, 4 * guess, pitch)
        R2 = punctured_covering_radius(cps, U, pitch=pitch)
        return R1 + n * R2
    raise ValueError(f"unknown method {method!r}")


def bounded_gap_ap(cps: CpsDescriptor, window: Window, n: int, x, fragment: PointSet | None = None) -> Progression:
    """The ``(n+1)``-term progression built from the ``(V, U)`` split near ``x``.

    ``s`` is the point of ``model_set(V)`` nearest to ``x`` and ``t`` the
    nonzero point of ``model_set(U)`` of least |phys|; every term then sits in
    the model set of ``window`` within ``|s - x| + n|t|`` of ``x``.
    """
    Wc = window if cps.ring is None else window_interval(cps, window)
    V, U = split_window(Wc, n)
    t = nearest_nonzero(cps, U)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    r = 4.0
    for _ in range(40):
        reg = tuple((float(c) - r, float(c) + r) for c in xv)
        ps = enumerate_model_set(cps, V, reg)
        if len(ps):
            d = np.linalg.norm(ps.phys - xv, axis=1)
            i = int(np.argmin(d))
            if d[i] <= r:
                s = ps.elements_at([i])[0]
                return Progression(s, t, n + 1, witness=U, cps=cps)
        r *= 2
    raise ValueError("no point of the shrunken window found near x")
