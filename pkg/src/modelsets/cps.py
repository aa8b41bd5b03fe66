"""Model-set enumeration and the basic Delone diagnostics."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .pointset import (
    CpsDescriptor,
    PointSet,
    Region,
    as_region,
    region_contains,
    region_expand,
)
from .quadratic import QuadElem, as_fraction, sign_minus_array
from .windows import Interval, Window

__all__ = [
    "GuardExceeded",
    "GUARD_BAND",
    "star",
    "enumerate_model_set",
    "is_member",
    "covering_radius_estimate",
    "min_gap",
    "is_relatively_dense",
    "is_uniformly_discrete",
    "window_interval",
]

GUARD_BAND = 1e-9
MAX_CANDIDATES = 50_000_000


class GuardExceeded(RuntimeError):
    """An instance-size guard was hit; the computation was not attempted."""


def star(x, cps: CpsDescriptor | None = None):
    """Internal-space partner of a lattice point.

    For a quadratic-ring element ``m + n*w`` this is the Galois conjugate
    ``m + n*w'`` (returned as a field element, exact).  For a numeric CPS pass
    the lattice coordinates; the exact internal vector is returned.
    """
    if isinstance(x, QuadElem):
        return x.conj()
    if cps is None:
        raise ValueError("lattice coordinates need a CPS")
    if cps.ring is not None:
        return cps.element(x).conj()
    return cps.exact_point(x)[1]


def window_interval(cps: CpsDescriptor, window: Window) -> Interval:
    """The window of an algebraic CPS as an interval with field endpoints."""
    iv = window.as_interval()
    ring = cps.ring
    return Interval(QuadElem.coerce(iv.lo, ring), QuadElem.coerce(iv.hi, ring), iv.closed_lo, iv.closed_hi)


def _check_bounded(window: Window):
    for lo, hi in window.bbox():
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("window must be bounded")


def enumerate_model_set(cps: CpsDescriptor, window: Window, region) -> PointSet:
    """All ``x`` in the lattice projection with ``x`` in ``region`` (closed box) and ``x*`` in ``window``."""
    _check_bounded(window)
    region = as_region(region, cps.physical_dim)
    prov = {"cps": str(cps), "window": str(window)}
    if window.dim != cps.internal_dim:
        raise ValueError("window dimension does not match the internal space")
    if cps.ring is not None:
        coords = _enumerate_algebraic(cps, window_interval(cps, window), region)
        return PointSet.from_coords(coords, cps, region, prov)
    coords, unsure = _enumerate_numeric(cps, window, region)
    return PointSet.from_coords(coords, cps, region, prov, boundary_uncertain=unsure)


def _enumerate_algebraic(cps: CpsDescriptor, W: Interval, region: Region) -> np.ndarray:
    ring = cps.ring
    empty = np.zeros((0, 2), dtype=np.int64)
    if W.is_empty:
        return empty
    (x1, x2), = region
    x1 = QuadElem.coerce(x1, ring)
    x2 = QuadElem.coerce(x2, ring)
    w1, w2 = W.lo, W.hi
    sd = ring.sqrt_d
    # phys - star = n*sqrt(D)
    n_lo = math.floor(float(x1 - w2) / sd) - 1
    n_hi = math.ceil(float(x2 - w1) / sd) + 1
    if n_hi - n_lo > MAX_CANDIDATES:
        raise GuardExceeded(f"enumeration would scan {n_hi - n_lo} values of n")
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    om, omc = ring.omega, ring.omega_conj
    lo = np.maximum(float(w1) - n * omc, float(x1) - n * om)
    hi = np.minimum(float(w2) - n * omc, float(x2) - n * om)
    m_lo = np.floor(lo).astype(np.int64) - 1
    m_hi = np.ceil(hi).astype(np.int64) + 1
    cnt = np.maximum(m_hi - m_lo + 1, 0)
    total = int(cnt.sum())
    if total > MAX_CANDIDATES:
        raise GuardExceeded(f"enumeration would test {total} candidates")
    if total == 0:
        return empty
    nn = np.repeat(n, cnt)
    start = np.repeat(m_lo - np.concatenate([[0], np.cumsum(cnt)[:-1]]), cnt)
    mm = start + np.arange(total, dtype=np.int64)
    # exact filtering; star(m + n w) = (m + a n) - n w
    ms, ns = mm + ring.a * nn, -nn
    s_lo = sign_minus_array(ms, ns, w1)
    s_hi = sign_minus_array(ms, ns, w2)
    keep = (s_lo >= 0) if W.closed_lo else (s_lo > 0)
    keep &= (s_hi <= 0) if W.closed_hi else (s_hi < 0)
    keep &= sign_minus_array(mm, nn, x1) >= 0
    keep &= sign_minus_array(mm, nn, x2) <= 0
    return np.stack([mm[keep], nn[keep]], axis=1)


def _enumerate_numeric(cps: CpsDescriptor, window: Window, region: Region):
    d = cps.physical_dim
    B = cps._basis_float()
    Binv = np.linalg.inv(B)
    box = [(float(lo), float(hi)) for lo, hi in region] + list(window.bbox())
    c = np.array([(lo + hi) / 2 for lo, hi in box])
    h = np.array([(hi - lo) / 2 for lo, hi in box]) + 1e-9
    kc = c @ Binv
    kh = h @ np.abs(Binv)
    ranges = [np.arange(math.floor(a - b) - 1, math.ceil(a + b) + 2) for a, b in zip(kc, kh)]
    total = math.prod(len(r) for r in ranges)
    if total > MAX_CANDIDATES:
        raise GuardExceeded(f"numeric enumeration would test {total} lattice points")
    k = np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, len(ranges))
    y = k @ B
    phys, internal = y[:, :d], y[:, d:]
    margin = window.margin_array(internal)
    inside = margin > GUARD_BAND
    unsure = np.abs(margin) <= GUARD_BAND
    Bs, den = cps._basis_scaled()
    for i in np.flatnonzero(unsure):
        vec = [Fraction(int(v), den) for v in (k[i].astype(object) @ Bs)]
        inside[i] = window.contains_rational(tuple(vec[d:]))
    # closed region, exact near the faces
    for axis, (lo, hi) in enumerate(region):
        for bound, side in ((lo, 1), (hi, -1)):
            diff = (phys[:, axis] - float(bound)) * side
            near = np.abs(diff) <= 1e-7 * max(1.0, abs(float(bound)))
            ok = diff > 0
            for i in np.flatnonzero(near & inside):
                v = Fraction(int(k[i].astype(object) @ Bs[:, axis]), den)
                ok[i] = (v - as_fraction(bound)) * side >= 0
            inside &= ok
    coords = k[inside]
    # injectivity of the physical projection on what was enumerated
    if len(coords) > 1:
        exact_phys = (coords.astype(object) @ Bs[:, :d]).tolist()
        if len({tuple(r) for r in exact_phys}) != len(exact_phys):
            raise ValueError("physical projection is not injective on the enumerated region")
    return coords, unsure[inside]


def is_member(cps: CpsDescriptor, window: Window, x) -> bool:
    """``x* in window`` decided exactly; ``x`` is a QuadElem or lattice coordinates."""
    if cps.ring is not None:
        if not isinstance(x, QuadElem):
            x = cps.element(cps.coords_of(x))
        if not x.is_integral:
            raise ValueError(f"{x} is not a lattice point")
        return window_interval(cps, window).contains(x.conj())
    _, internal = cps.exact_point(x)
    return window.contains_rational(internal)


# -- Delone diagnostics ------------------------------------------------------------

def min_gap(ps: PointSet) -> float:
    """Smallest distance between two distinct points of the fragment."""
    if len(ps) < 2:
        raise ValueError("min_gap needs at least two points")
    if ps.dim == 1:
        return float(np.diff(ps.x).min())
    from scipy.spatial import cKDTree

    d, _ = cKDTree(ps.phys).query(ps.phys, k=2)
    return float(d[:, 1].min())


def covering_radius_estimate(ps: PointSet, region=None, pitch: float | None = None,
                             max_samples: int = 20_000_000) -> float:
    """Largest distance from a grid sample of ``region`` to the nearest point of ``ps``.

    The grid has spacing ``pitch`` (default ``min_gap/4``) and includes the
    upper faces.  ``ps.region`` must contain ``region`` grown by the returned
    radius, otherwise points missing beyond the fragment could distort the
    estimate and ``ValueError`` is raised.
    """
    if len(ps) == 0:
        raise ValueError("empty point set")
    region = as_region(region if region is not None else ps.region, ps.dim)
    if pitch is None:
        pitch = min_gap(ps) / 4 if len(ps) > 1 else 0.1
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    axes = []
    for lo, hi in region:
        lo, hi = float(lo), float(hi)
        k = int(math.floor((hi - lo) / pitch))
        ax = lo + pitch * np.arange(k + 1)
        if ax[-1] < hi:
            ax = np.append(ax, hi)
        axes.append(ax)
    if math.prod(len(a) for a in axes) > max_samples:
        raise GuardExceeded("covering-radius grid too large; increase pitch")
    if ps.dim == 1:
        xs = ps.x
        g = axes[0]
        j = np.searchsorted(xs, g)
        right = np.where(j < len(xs), xs[np.minimum(j, len(xs) - 1)] - g, np.inf)
        left = np.where(j > 0, g - xs[np.maximum(j - 1, 0)], np.inf)
        R = float(np.minimum(left, right).max())
    else:
        from scipy.spatial import cKDTree

        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, ps.dim)
        dist, _ = cKDTree(ps.phys).query(grid)
        R = float(dist.max())
    needed = region_expand(region, as_fraction(R))
    if not region_contains(ps.region, needed):
        raise ValueError(
            f"margin too small: fragment region must extend {R:.6g} beyond the sampled region"
        )
    return R


def is_relatively_dense(ps: PointSet, radius: float, region=None, pitch=None) -> bool:
    return covering_radius_estimate(ps, region, pitch) <= radius


def is_uniformly_discrete(ps: PointSet, r: float) -> bool:
    return min_gap(ps) >= r
