"""Densities along A_n = [-n, n]^d, the d_B semi-metric, almost periods and pair statistics.

Finite-n values are exact rationals ``count / (2n)^d``; limits are never
claimed, only the value at the largest index plus a tail oscillation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .cps import GuardExceeded, enumerate_model_set, window_interval
from .pointset import CpsDescriptor, PointSet, as_region, region_contains
from .quadratic import QuadElem
from .windows import Window

__all__ = [
    "AveragingSequence",
    "DensityEstimate",
    "density",
    "d_B",
    "symmetric_difference",
    "translation_bound",
    "almost_period_candidates",
    "almost_periods",
    "intersect_translates",
    "IntersectionEntry",
    "IntersectionReport",
    "verify_p6",
    "autocorrelation_coeffs",
    "CounterexampleSet",
    "counterexample_set",
    "NoApReport",
    "verify_no_3ap",
    "MaxDensityReport",
    "max_density_check",
]


@dataclass(frozen=True)
class AveragingSequence:
    """The boxes ``[-n, n]^d`` for the listed ``n``."""

    ns: tuple[int, ...]
    dim: int = 1

    def __post_init__(self):
        ns = tuple(int(n) for n in self.ns)
        if not ns:
            raise ValueError("averaging sequence needs at least one index")
        if any(n <= 0 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("indices must be positive and strictly increasing")
        object.__setattr__(self, "ns", ns)

    @classmethod
    def geometric(cls, n_max: int, steps: int = 12, n_min: int = 10, dim: int = 1) -> AveragingSequence:
        vals = np.unique(np.round(np.geomspace(min(n_min, n_max), n_max, steps)).astype(int))
        return cls(tuple(vals), dim)

    @property
    def n_max(self) -> int:
        return self.ns[-1]

    def region(self, n: int):
        return tuple((-n, n) for _ in range(self.dim))

    def volume(self, n: int) -> int:
        return (2 * n) ** self.dim


@dataclass(frozen=True)
class DensityEstimate:
    ns: tuple[int, ...]
    counts: tuple[int, ...]
    partials: tuple[Fraction, ...]

    @property
    def value(self) -> float:
        return float(self.partials[-1])

    @property
    def exact_value(self) -> Fraction:
        return self.partials[-1]

    @property
    def oscillation(self) -> float:
        tail = self.partials[len(self.partials) // 2:]
        return float(max(tail) - min(tail))

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "oscillation": self.oscillation,
            "partials": [{"n": n, "count": c, "value": float(p)}
                         for n, c, p in zip(self.ns, self.counts, self.partials)],
        }


def _require_cover(ps: PointSet, avg: AveragingSequence, what: str = "point set"):
    if ps.dim != avg.dim:
        raise ValueError("dimension mismatch between point set and averaging sequence")
    if not region_contains(ps.region, as_region(avg.region(avg.n_max), avg.dim)):
        raise ValueError(f"{what} is not enumerated on the largest averaging box")


def _counts(ps: PointSet, avg: AveragingSequence) -> list[int]:
    return [int(ps.box_mask(avg.region(n)).sum()) for n in avg.ns]


def _estimate(avg: AveragingSequence, counts) -> DensityEstimate:
    partials = tuple(Fraction(c, avg.volume(n)) for n, c in zip(avg.ns, counts))
    return DensityEstimate(avg.ns, tuple(counts), partials)


def density(ps: PointSet, avg: AveragingSequence) -> DensityEstimate:
    """``#(ps ∩ A_n) / (2n)^d`` for each index."""
    _require_cover(ps, avg)
    return _estimate(avg, _counts(ps, avg))


def symmetric_difference(lam: PointSet, gam: PointSet, tol: float = 1e-9):
    """Masks ``(lam not in gam, gam not in lam)``."""
    return ~lam.isin(gam, tol), ~gam.isin(lam, tol)


def d_B(lam: PointSet, gam: PointSet, avg: AveragingSequence, tol: float = 1e-9) -> DensityEstimate:
    """Density of the symmetric difference ``lam Δ gam`` along ``avg``."""
    _require_cover(lam, avg, "first set")
    _require_cover(gam, avg, "second set")
    a, b = symmetric_difference(lam, gam, tol)
    la, gb = lam.take(a), gam.take(b)
    counts = [x + y for x, y in zip(_counts(la, avg), _counts(gb, avg))]
    return _estimate(avg, counts)


def translation_bound(sym_diff: PointSet, v: float, n: int) -> float:
    """Allowed change of the finite-n value of ``d_B`` when both sets move by ``v`` (1-D).

    ``2|v| * (d/n) * rho`` with ``rho`` the largest number of points of the
    symmetric difference in a window of length ``|v|``, per unit length.
    """
    if sym_diff.dim != 1:
        raise ValueError("translation_bound is implemented for one-dimensional sets")
    v = abs(float(v))
    if v == 0 or len(sym_diff) == 0:
        return 0.0
    xs = sym_diff.x
    j = np.searchsorted(xs, xs + v, side="right")
    cmax = int((j - np.arange(len(xs))).max())
    rho = cmax / v
    return 2 * v * (1 / n) * rho


# -- almost periods ------------------------------------------------------------------

def almost_period_candidates(lam: PointSet, search) -> PointSet:
    """Differences of fragment points that fall in ``search``.

    Pairs are drawn from the points within ``2 * max|search|`` of the origin.
    """
    search = as_region(search, lam.dim)
    reach = 2 * max(max(abs(float(lo)), abs(float(hi))) for lo, hi in search)
    pool = lam.restrict(tuple((-reach, reach) for _ in range(lam.dim)))
    if len(pool) > 20_000:
        raise GuardExceeded("candidate pool too large; shrink the search region")
    cap = [(float(lo), float(hi)) for lo, hi in search]
    if pool.coords is not None:
        rows = []
        for i in range(0, len(pool), 256):
            D = (pool.coords[i:i + 256, None, :] - pool.coords[None, :, :]).reshape(-1, pool.coords.shape[1])
            P = (pool.phys[i:i + 256, None, :] - pool.phys[None, :, :]).reshape(-1, pool.dim)
            ok = np.all([(P[:, a] >= lo - 1e-6) & (P[:, a] <= hi + 1e-6) for a, (lo, hi) in enumerate(cap)], axis=0)
            rows.append(D[ok])
        D = np.unique(np.concatenate(rows), axis=0)
        return PointSet.from_coords(D, pool.cps, search).restrict(search)
    P = (pool.phys[:, None, :] - pool.phys[None, :, :]).reshape(-1, pool.dim)
    return PointSet.from_floats(P, search).restrict(search)


def _slice_1d(ps: PointSet, lo, hi) -> tuple[int, int]:
    """Index range of the points of a sorted 1-D exact set with ``lo <= x <= hi``, exact."""
    xs = ps.x
    band = 1e-7 * max(1.0, abs(float(lo)), abs(float(hi)))
    i = int(np.searchsorted(xs, float(lo) - band))
    while i < len(xs) and ps._compare(np.array([i]), 0, lo)[0] < 0:
        i += 1
    j = int(np.searchsorted(xs, float(hi) + band, side="right"))
    while j > i and ps._compare(np.array([j - 1]), 0, hi)[0] > 0:
        j -= 1
    return i, j


def _linear_keys(ps: PointSet):
    """Keys ``k(x)`` with ``k(x + t) = k(x) + k(t)``, or None when they could overflow."""
    if ps.coords is None or ps.coords.shape[1] > 2:
        return None
    if len(ps) and int(np.abs(ps.coords).max()) >= 2**28:
        return None
    weights = np.array([2**31, 1][-ps.coords.shape[1]:], dtype=np.int64)
    return weights


def almost_periods(lam: PointSet, eps: float, search, avg: AveragingSequence,
                   candidates: PointSet | None = None, tol: float = 1e-9) -> list:
    """Candidates ``t`` in ``search`` with ``d_B(lam, t + lam) < eps`` at the largest index.

    Returns ``(t, value)`` pairs in candidate order.
    """
    if candidates is None:
        candidates = almost_period_candidates(lam, search)
    if len(candidates) == 0:
        raise ValueError("no candidate translations in the search region")
    n = avg.n_max
    box = avg.region(n)
    reach = float(np.abs(candidates.phys).max()) + 1
    if not region_contains(lam.region, as_region(tuple((-n - reach, n + reach) for _ in range(lam.dim)), lam.dim)):
        raise ValueError("fragment too small for the translated set to cover the averaging box")
    vol = avg.volume(n)
    bound = Fraction(repr(eps)) if isinstance(eps, float) else Fraction(eps)
    weights = _linear_keys(lam) if lam.dim == 1 else None
    out = []
    if weights is not None and _linear_keys(candidates) is not None:
        keys = lam.coords @ weights
        b0, b1 = _slice_1d(lam, -n, n)
        base = np.sort(keys[b0:b1])
        for t, tk in zip(candidates.elements(), candidates.coords @ weights):
            # x + t in [-n, n]  <=>  x in [-n - t, n - t]
            i, j = _slice_1d(lam, -n - t, n - t)
            moved = keys[i:j] + tk
            pos = np.searchsorted(base, moved)
            common = int(np.count_nonzero(base[np.minimum(pos, len(base) - 1)] == moved)) if len(base) else 0
            val = Fraction(len(base) + len(moved) - 2 * common, vol)
            if val < bound:
                out.append((t, val))
        return out
    base = lam.restrict(box)
    for t in candidates.elements():
        moved = lam.translate(t).restrict(box)
        a, b = symmetric_difference(base, moved, tol)
        val = Fraction(int(a.sum() + b.sum()), vol)
        if val < bound:
            out.append((t, val))
    return out


def _is_zero(t) -> bool:
    if isinstance(t, tuple):
        return all(v == 0 for v in t)
    return t == 0


def _scale(k: int, t):
    if isinstance(t, tuple):
        return tuple(k * v for v in t)
    return k * t


def intersect_translates(lam: PointSet, t, n: int, tol: float = 1e-9) -> PointSet:
    """``lam ∩ (t + lam) ∩ ... ∩ (n t + lam)`` on the part of the fragment where all are known.

    Each surviving ``s`` carries the progression ``s, s - t, ..., s - n t`` inside ``lam``.
    """
    mask = np.ones(len(lam), bool)
    region = list(lam.region)
    for k in range(1, n + 1):
        shifted = lam.translate(_scale(k, t))
        mask &= lam.isin(shifted, tol)
        region = [(max(a0, a1), min(b0, b1)) for (a0, b0), (a1, b1) in zip(region, shifted.region)]
    return lam.take(mask, region=tuple(region))


@dataclass(frozen=True)
class IntersectionEntry:
    t: object
    d_lam: Fraction
    gamma_density: Fraction
    density_ok: bool
    chain_lhs: Fraction
    chain_rhs: Fraction
    chain_ok: bool
    inclusion_ok: bool

    @property
    def ok(self) -> bool:
        return self.density_ok and self.chain_ok and self.inclusion_ok


@dataclass(frozen=True)
class IntersectionReport:
    eps: float
    n: int
    N: int
    density: Fraction
    threshold: float
    tol: float
    entries: tuple[IntersectionEntry, ...] = field(default_factory=tuple)

    @property
    def nonzero(self) -> list[IntersectionEntry]:
        return [e for e in self.entries if not _is_zero(e.t)]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def as_dict(self) -> dict:
        return {
            "eps": self.eps, "n": self.n, "N": self.N, "density": float(self.density),
            "threshold": self.threshold, "tol": self.tol, "ok": self.ok,
            "entries": [{"t": str(e.t), "t_phys": float(e.t) if not isinstance(e.t, tuple) else None,
                         "d_B": float(e.d_lam), "gamma_density": float(e.gamma_density),
                         "density_ok": e.density_ok, "chain_lhs": float(e.chain_lhs),
                         "chain_rhs": float(e.chain_rhs), "chain_ok": e.chain_ok,
                         "inclusion_ok": e.inclusion_ok} for e in self.entries],
        }


def verify_p6(lam: PointSet, eps: float, n: int, avg: AveragingSequence, search,
              tol: float = 0.02, candidates: PointSet | None = None) -> IntersectionReport:
    """Check the density of ``n``-fold translate intersections for almost periods.

    Translations are the candidates with ``d_B(lam, t + lam) < eps * dens / n``.
    For each, on ``A_N`` (``N`` the largest index):
      * ``dens(Γ_t) >= (1 - eps) * dens(lam) - tol``;
      * ``#(lam \\ Γ_t) <= Σ_k #((k t + lam) Δ ((k+1) t + lam))``, exactly;
      * every point of ``lam \\ Γ_t`` lies in one of those symmetric differences.
    """
    N = avg.n_max
    box = avg.region(N)
    dens = density(lam, avg).exact_value
    if dens <= 0:
        raise ValueError("density must be positive")
    threshold = eps * float(dens) / n
    T = almost_periods(lam, threshold, search, avg, candidates)
    vol = avg.volume(N)
    base = lam.restrict(box)
    entries = []
    for t, dval in T:
        gamma = intersect_translates(lam, t, n)
        if not region_contains(gamma.region, as_region(box, lam.dim)):
            raise ValueError("fragment too small: translate intersection does not cover the averaging box")
        g = gamma.restrict(box)
        gd = Fraction(len(g), vol)
        density_ok = float(gd) >= (1 - eps) * float(dens) - tol
        lost = base.take(~base.isin(g))
        # consecutive translates, restricted to the box
        shifted = [lam.translate(_scale(k, t)).restrict(box) for k in range(n + 1)]
        covered = np.zeros(len(lost), bool)
        rhs = 0
        for k in range(n):
            a, b = symmetric_difference(shifted[k], shifted[k + 1])
            rhs += int(a.sum() + b.sum())
            sd_pts = [shifted[k].take(a), shifted[k + 1].take(b)]
            for part in sd_pts:
                if len(part):
                    covered |= lost.isin(part)
        lhs = Fraction(len(lost), vol)
        rhs_f = Fraction(rhs, vol)
        entries.append(IntersectionEntry(t, dval, gd, density_ok, lhs, rhs_f, lhs <= rhs_f, bool(covered.all())))
    return IntersectionReport(eps, n, N, dens, threshold, tol, tuple(entries))


# -- autocorrelation -----------------------------------------------------------------

def autocorrelation_coeffs(lam: PointSet, n: int, z_cap, max_distinct: int = 200_000) -> dict:
    """``#{(x, y) in (lam ∩ A_n)^2 : x - y = z} / (2n)^d`` for every ``z`` in ``z_cap``.

    Keys are exact differences when the set carries coordinates, otherwise
    floats rounded to 1e-9.  Raises if the differences in ``z_cap`` are not
    locally finite at that resolution.
    """
    avg = AveragingSequence((n,), lam.dim)
    _require_cover(lam, avg)
    pts = lam.restrict(avg.region(n))
    cap = [(float(lo), float(hi)) for lo, hi in as_region(z_cap, lam.dim)]
    vol = avg.volume(n)
    chunks = []
    src = pts.coords if pts.coords is not None else np.round(pts.phys / 1e-9).astype(np.int64)
    for i in range(0, len(pts), 256):
        D = (src[i:i + 256, None, :] - src[None, :, :]).reshape(-1, src.shape[1])
        P = (pts.phys[i:i + 256, None, :] - pts.phys[None, :, :]).reshape(-1, pts.dim)
        ok = np.all([(P[:, a] >= lo - 1e-12) & (P[:, a] <= hi + 1e-12) for a, (lo, hi) in enumerate(cap)], axis=0)
        chunks.append(D[ok])
    if not chunks:
        return {}
    D = np.concatenate(chunks)
    keys, counts = np.unique(D, axis=0, return_counts=True)
    if len(keys) > max_distinct:
        raise ValueError("difference set is not locally finite on the cap at this resolution")
    out = {}
    ring = lam.cps.ring if lam.cps is not None else None
    for row, c in zip(keys, counts):
        if pts.coords is None:
            key = float(row[0]) * 1e-9 if pts.dim == 1 else tuple(float(v) * 1e-9 for v in row)
        elif ring is not None:
            key = QuadElem(int(row[0]), int(row[1]), ring)
        else:
            key = tuple(int(v) for v in row)
        out[key] = Fraction(int(c), vol)
    return out


# -- progression-free set ---------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleSet:
    """``{0} ∪ {n + a_n} ∪ {-n + b_n}`` with ``a_n = (e/3)^(2n+2)`` and ``b_n = (e/3)^(2n+1)``."""

    N: int
    precision: int
    points: tuple[Decimal, ...]
    a_plus: tuple[Decimal, ...]
    a_minus: tuple[Decimal, ...]

    def __len__(self) -> int:
        return len(self.points)

    def as_floats(self) -> np.ndarray:
        return np.array([float(p) for p in self.points])

    def as_pointset(self) -> PointSet:
        return PointSet.from_floats(self.as_floats())


def counterexample_set(N: int, precision: int = 60) -> CounterexampleSet:
    """The ``2N + 1`` points evaluated with ``precision`` significant digits."""
    if N < 1:
        raise ValueError("N must be positive")
    ratio_log = math.log10(3 / math.e)
    smallest = (2 * N + 2) * ratio_log          # -log10 of the smallest perturbation
    needed = math.ceil(math.log10(N + 1) + smallest) + 10
    if precision < needed:
        raise ValueError(f"precision {precision} too low for N={N}; need at least {needed} digits")
    with localcontext() as ctx:
        ctx.prec = precision
        q = Decimal(1).exp() / 3
        a_plus = tuple(q ** (2 * n + 2) for n in range(1, N + 1))
        a_minus = tuple(q ** (2 * n + 1) for n in range(1, N + 1))
        pts = [Decimal(0)]
        pts += [n + a for n, a in zip(range(1, N + 1), a_plus)]
        pts += [-n + b for n, b in zip(range(1, N + 1), a_minus)]
    return CounterexampleSet(N, precision, tuple(sorted(pts)), a_plus, a_minus)


@dataclass(frozen=True)
class NoApReport:
    min_residual: object
    triple: tuple
    tol: float

    @property
    def passes(self) -> bool:
        return float(self.min_residual) > self.tol

    def as_dict(self) -> dict:
        return {"min_residual": str(self.min_residual), "triple": [str(v) for v in self.triple],
                "tol": self.tol, "passes": self.passes}


def _as_scaled_ints(values):
    """Exact integers ``v * 10^q`` (Decimal) or ``v * L`` (rationals) plus the scale."""
    if all(isinstance(v, Decimal) for v in values):
        q = max(0, -min(v.as_tuple().exponent for v in values))
        with localcontext() as ctx:
            ctx.prec = 10_000
            return [int(v.scaleb(q)) for v in values], Decimal(10) ** q
    fr = [Fraction(v) for v in values]
    L = math.lcm(*(f.denominator for f in fr)) if fr else 1
    return [int(f * L) for f in fr], L


def verify_no_3ap(points, tol: float = 1e-9, guard: int = 5000) -> NoApReport:
    """Least ``|2b - a - c|`` over ``a < b < c`` in the set.

    Decimals, integers and fractions are scanned exactly; float point sets in
    floating point.  For each middle element a two-pointer sweep finds the
    best outer pair, O(n^2) overall.
    """
    if isinstance(points, CounterexampleSet):
        vals = list(points.points)
    elif isinstance(points, PointSet):
        if points.dim != 1:
            raise ValueError("one-dimensional sets only")
        vals = [int(c[0]) for c in points.coords] if points.coords is not None and points.cps is None \
            else [float(v) for v in points.x]
    else:
        vals = list(points)
    if len(vals) > guard:
        raise GuardExceeded(f"{len(vals)} points exceeds the triple-scan guard {guard}")
    if len(vals) < 3:
        raise ValueError("need at least three points")
    if all(isinstance(v, float) for v in vals):
        xs, scale = sorted(vals), None
    else:
        xs, scale = _as_scaled_ints(sorted(vals))
    best, triple = None, None
    n = len(xs)
    for j in range(1, n - 1):
        i, k = j - 1, j + 1
        two_b = 2 * xs[j]
        while i >= 0 and k < n:
            s = xs[i] + xs[k] - two_b
            if best is None or abs(s) < best:
                best, triple = abs(s), (i, j, k)
                if best == 0:
                    break
            if s < 0:
                k += 1
            else:
                i -= 1
        if best == 0:
            break
    order = sorted(vals)
    trip = tuple(order[m] for m in triple)
    if scale is None:
        res = best
    elif isinstance(scale, Decimal):
        with localcontext() as ctx:
            ctx.prec = 10_000
            res = Decimal(best) / scale
    else:
        res = Fraction(best, scale)
    return NoApReport(res, trip, tol)


# -- maximal density -------------------------------------------------------------------

@dataclass(frozen=True)
class MaxDensityReport:
    empirical: float
    target: float
    N: int

    @property
    def gap(self) -> float:
        return abs(self.empirical - self.target)

    def as_dict(self) -> dict:
        return {"empirical": self.empirical, "target": self.target, "gap": self.gap, "N": self.N}


def max_density_check(cps: CpsDescriptor, window: Window, avg: AveragingSequence) -> MaxDensityReport:
    """Empirical density of the model set against ``|W| / covolume``."""
    region = avg.region(avg.n_max)
    ps = enumerate_model_set(cps, window, region)
    est = density(ps, avg)
    meas = float(window_interval(cps, window).length) if cps.ring is not None else window.measure()
    return MaxDensityReport(est.value, meas * cps.lattice_density, avg.n_max)
