"""Meyer-set diagnostics and finite translate covers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cps import GuardExceeded, covering_radius_estimate, min_gap
from .pointset import PointSet, as_region, region_contains, region_expand
from .quadratic import QuadElem, as_fraction

__all__ = [
    "MeyerReport",
    "difference_set",
    "check_meyer",
    "find_cover_F",
    "check_cover",
    "check_diff_cover",
    "element_norm",
]

MAX_DIFF_POINTS = 4000


def element_norm(x) -> float:
    """Euclidean size of a point given in any PointSet element representation."""
    if isinstance(x, QuadElem):
        return abs(float(x))
    if isinstance(x, tuple):
        return float(np.linalg.norm([float(v) for v in x]))
    return abs(float(x))


def _phys_norm(ps: PointSet, x) -> float:
    if ps.cps is not None and ps.cps.ring is None and isinstance(x, tuple):
        return float(np.linalg.norm(ps.cps.phys_of(np.array(x))[0]))
    return element_norm(x)


def difference_set(ps: PointSet, cap=None) -> PointSet:
    """``{x - y : x, y in ps}`` restricted to the closed box ``cap``.

    ``cap`` defaults to the symmetric box spanned by the fragment's diameter.
    """
    n = len(ps)
    if n > MAX_DIFF_POINTS:
        raise GuardExceeded(f"difference set of {n} points exceeds the guard of {MAX_DIFF_POINTS}")
    if cap is None:
        if n:
            span = ps.phys.max(axis=0) - ps.phys.min(axis=0)
            cap = tuple((-float(s), float(s)) for s in span)
        else:
            cap = tuple((0, 0) for _ in range(ps.dim))
    cap = as_region(cap, ps.dim)
    if ps.coords is not None:
        c = ps.coords
        diffs = (c[:, None, :] - c[None, :, :]).reshape(-1, c.shape[1])
        out = PointSet.from_coords(diffs, ps.cps, cap, {"difference_set_of": ps.provenance})
        return out.restrict(cap)
    p = ps.phys
    diffs = (p[:, None, :] - p[None, :, :]).reshape(-1, p.shape[1])
    return PointSet.from_floats(diffs, cap).restrict(cap)


@dataclass(frozen=True)
class MeyerReport:
    """Finite-sample Meyer diagnostics; thresholds are reported, not implied."""

    covering_radius: float
    relatively_dense: bool
    max_radius: float
    diff_min_gap: float
    diff_uniformly_discrete: bool
    gap_threshold: float
    region: tuple

    @property
    def is_meyer(self) -> bool:
        return self.relatively_dense and self.diff_uniformly_discrete

    def as_dict(self) -> dict:
        return {
            "covering_radius": self.covering_radius,
            "relatively_dense": self.relatively_dense,
            "max_radius": self.max_radius,
            "diff_min_gap": self.diff_min_gap,
            "diff_uniformly_discrete": self.diff_uniformly_discrete,
            "gap_threshold": self.gap_threshold,
            "region": [[float(lo), float(hi)] for lo, hi in self.region],
            "is_meyer": self.is_meyer,
        }


def _central(region, frac: float = 0.5):
    out = []
    for lo, hi in region:
        c, h = (float(lo) + float(hi)) / 2, (float(hi) - float(lo)) / 2 * frac
        out.append((c - h, c + h))
    return tuple(out)


def check_meyer(ps: PointSet, region=None, gap_threshold: float = 1e-3,
                max_radius: float | None = None, pitch=None) -> MeyerReport:
    """Covering radius of ``ps`` on ``region`` and min gap of its difference set.

    ``region`` defaults to the central half of the fragment; the difference
    set is taken over the points in ``region`` and capped at its half-width.
    ``max_radius`` (default: a quarter of the narrowest side) decides the
    relative-denseness flag.
    """
    region = as_region(region, ps.dim) if region is not None else as_region(_central(ps.region), ps.dim)
    R = covering_radius_estimate(ps, region, pitch)
    widths = [float(hi) - float(lo) for lo, hi in region]
    if max_radius is None:
        max_radius = min(widths) / 4
    inner = ps.restrict(region)
    half = min(widths) / 2
    diffs = difference_set(inner, tuple((-half, half) for _ in range(ps.dim)))
    gap = min_gap(diffs) if len(diffs) > 1 else float("inf")
    return MeyerReport(R, R <= max_radius, float(max_radius), gap, gap >= gap_threshold,
                       gap_threshold, region)


# -- finite covers ------------------------------------------------------------------

def _compatible(a: PointSet, b: PointSet) -> bool:
    return a.coords is not None and b.coords is not None and a.cps == b.cps \
        and a.coords.shape[1] == b.coords.shape[1]


def _member_mask(pts: PointSet, shift, target: PointSet, tol: float) -> np.ndarray:
    """Mask of ``x in pts`` with ``x - shift`` in ``target``."""
    moved = pts.translate(_neg(shift))
    return moved.isin(target, tol)


def _neg(x):
    if isinstance(x, tuple):
        return tuple(-v for v in x)
    return -x


def _order_from_origin(ps: PointSet) -> np.ndarray:
    norms = np.round(np.linalg.norm(ps.phys, axis=1), 9)
    keys = [norms] if ps.coords is None else [*(ps.coords.T[::-1]), norms]
    return np.lexsort(keys)


def find_cover_F(sub: PointSet, full: PointSet, region=None, guard: int = 64,
                 tol: float = 1e-9) -> list:
    """A finite ``F`` with ``full ∩ region ⊆ sub + F``, built greedily.

    Repeatedly take the uncovered point ``x`` of ``full`` nearest the origin
    and add ``x - y`` for the point ``y`` of ``sub`` nearest ``x``.  The
    result need not be minimal.  Raises ``GuardExceeded`` past ``guard``
    translates.
    """
    if len(sub) == 0:
        raise ValueError("sub is empty")
    region = as_region(region if region is not None else full.region, full.dim)
    target = full.restrict(region)
    order = _order_from_origin(target)
    covered = np.zeros(len(target), bool)
    F: list = []
    exact = _compatible(sub, full)
    while not covered.all():
        if len(F) >= guard:
            raise GuardExceeded(f"cover needs more than {guard} translates on this region")
        i = order[np.flatnonzero(~covered[order])[0]]
        d = np.linalg.norm(sub.phys - target.phys[i], axis=1)
        j = int(np.argmin(d))
        if exact:
            x = target.elements_at([i])[0]
            y = sub.elements_at([j])[0]
            t = x - y if not isinstance(x, tuple) else tuple(a - b for a, b in zip(x, y))
        else:
            t = target.phys[i] - sub.phys[j]
            t = float(t[0]) if full.dim == 1 else tuple(float(v) for v in t)
        F.append(t)
        covered |= _member_mask(target, t, sub, tol)
    return F


def check_cover(sub: PointSet, full: PointSet, F, region=None, tol: float = 1e-9) -> bool:
    """Exhaustive check of ``full ∩ region ⊆ sub + F``."""
    region = as_region(region if region is not None else full.region, full.dim)
    target = full.restrict(region)
    covered = np.zeros(len(target), bool)
    for t in F:
        covered |= _member_mask(target, t, sub, tol)
    return bool(covered.all())


def check_diff_cover(ps: PointSet, F, region, tol: float = 1e-9) -> bool:
    """True iff every difference ``x - y`` of ``ps`` lying in ``region`` is in ``ps + F``.

    ``ps`` must be complete on ``region`` grown by ``max |f|`` so that
    membership of ``d - f`` is decidable from the fragment.
    """
    region = as_region(region, ps.dim)
    reach = max((_phys_norm(ps, f) for f in F), default=0.0)
    if not region_contains(ps.region, region_expand(region, as_fraction(reach))):
        raise ValueError("fragment does not cover the region grown by max |f|")
    diffs = difference_set(ps, region)
    covered = np.zeros(len(diffs), bool)
    for f in F:
        covered |= _member_mask(diffs, f, ps, tol)
    return bool(covered.all())
