"""Van der Waerden machinery: exact small W(r, k), colorings, monochromatic progressions.

Colors are ``0 .. r-1`` throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cps import GuardExceeded
from .meyer import check_cover, element_norm
from .pointset import CpsDescriptor, PointSet, as_region, region_contains
from .progressions import Progression, bounded_gap_ap, bounded_gap_radius, find_aps_bruteforce
from .quadratic import QuadElem, as_fraction
from .windows import Window

__all__ = [
    "VdwResult",
    "vdw_number_oracle",
    "has_mono_ap",
    "Coloring",
    "color",
    "product_coloring",
    "find_monochromatic_ap",
    "VdwRadius",
    "model_vdw_radius",
    "meyer_vdw_radius",
    "TraceEntry",
    "VdwCertificate",
    "certify_model_vdw",
    "integer_mono_ap",
    "ORACLE_GUARD",
]

ORACLE_GUARD = 40


# -- integer oracle -------------------------------------------------------------

@dataclass(frozen=True)
class VdwResult:
    """``number`` is W(r, k), or None when every length up to ``n_max`` admits a good coloring.

    ``witness`` is a longest coloring found without a monochromatic k-AP.
    """

    r: int
    k: int
    n_max: int
    number: int | None
    witness: tuple[int, ...]

    @property
    def exceeds(self) -> bool:
        return self.number is None


def has_mono_ap(colors, k: int) -> bool:
    """Does the sequence contain ``k`` equally spaced equal entries?"""
    n = len(colors)
    for d in range(1, n):
        if (k - 1) * d >= n:
            break
        for s in range(n - (k - 1) * d):
            c = colors[s]
            if all(colors[s + j * d] == c for j in range(1, k)):
                return True
    return False


def vdw_number_oracle(r: int, k: int, n_max: int = ORACLE_GUARD) -> VdwResult:
    """Exact W(r, k) by backtracking, or a report that it exceeds ``n_max``.

    Positions are colored left to right; a color is rejected as soon as it
    completes a monochromatic k-AP ending at the current position.  Color
    permutations are broken by allowing at most one new color per step.
    """
    if r < 1 or k < 2:
        raise ValueError("need r >= 1 and k >= 2")
    if n_max > ORACLE_GUARD:
        raise GuardExceeded(f"n_max {n_max} exceeds the oracle guard {ORACLE_GUARD}")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    colors = [0] * n_max
    best: list[int] = []

    def closes_ap(p: int, c: int) -> bool:
        for d in range(1, p // (k - 1) + 1):
            if all(colors[p - j * d] == c for j in range(1, k)):
                return True
        return False

    def extend(p: int, used: int) -> bool:
        nonlocal best
        if p > len(best):
            best = colors[:p]
        if p == n_max:
            return True
        for c in range(min(used + 1, r)):
            if not closes_ap(p, c):
                colors[p] = c
                if extend(p + 1, max(used, c + 1)):
                    return True
        return False

    if extend(0, 0):
        return VdwResult(r, k, n_max, None, tuple(best))
    return VdwResult(r, k, n_max, len(best) + 1, tuple(best))


def integer_mono_ap(colors, k: int) -> tuple[int, int] | None:
    """First ``(start, step)`` of a monochromatic k-AP in an index-colored sequence."""
    n = len(colors)
    for s in range(n):
        for d in range(1, n):
            if s + (k - 1) * d >= n:
                break
            if all(colors[s + j * d] == colors[s] for j in range(1, k)):
                return s, d
    return None


# -- colorings of point sets -------------------------------------------------------

def _key(x):
    if isinstance(x, QuadElem):
        return (x.m, x.n)
    if isinstance(x, tuple):
        return x
    return float(x)


@dataclass(frozen=True)
class Coloring:
    """Colors of the points of a fragment, indexed like ``ps``."""

    ps: PointSet
    colors: np.ndarray
    r: int
    scheme: str
    seed: int | None = None
    _lookup: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        cols = np.asarray(self.colors, dtype=np.int64)
        if len(cols) != len(self.ps):
            raise ValueError("coloring must assign a color to every point")
        if len(cols) and (cols.min() < 0 or cols.max() >= self.r):
            raise ValueError("color index out of range")
        object.__setattr__(self, "colors", cols)
        object.__setattr__(self, "_lookup", {_key(e): int(c) for e, c in zip(self.ps.elements(), cols)})

    def __call__(self, x) -> int:
        try:
            return self._lookup[_key(x)]
        except KeyError:
            raise KeyError(f"{x} is not in the colored fragment") from None

    @property
    def label(self) -> str:
        return self.scheme if self.seed is None else f"{self.scheme}(seed={self.seed})"


def color(ps: PointSet, scheme: str, r: int, seed: int | None = None,
          window: Window | None = None, values=None) -> Coloring:
    """Color a fragment.

    Schemes: ``random`` (seeded), ``periodic`` (index mod r), ``threshold``
    (which of ``r`` equal slices of an interval window holds ``x*``),
    ``explicit`` (``values``).
    """
    if r < 1:
        raise ValueError("r must be positive")
    n = len(ps)
    if r == 1:
        return Coloring(ps, np.zeros(n, np.int64), 1, "constant")
    if scheme == "random":
        if seed is None:
            raise ValueError("random colorings need an explicit seed")
        cols = np.random.default_rng(seed).integers(r, size=n)
    elif scheme == "periodic":
        cols = np.arange(n) % r
    elif scheme == "threshold":
        if ps.internal is None or window is None:
            raise ValueError("threshold coloring needs internal coordinates and a window")
        if ps.internal.shape[1] != 1:
            raise ValueError("threshold coloring is defined for one-dimensional internal space")
        iv = window.as_interval()
        lo, width = float(iv.lo), float(iv.length)
        cols = np.clip(np.floor((ps.internal[:, 0] - lo) / width * r), 0, r - 1).astype(np.int64)
    elif scheme == "explicit":
        if values is None:
            raise ValueError("explicit coloring needs values")
        cols = np.asarray(values)
    else:
        raise ValueError(f"unknown coloring scheme {scheme!r}")
    return Coloring(ps, cols, r, scheme, seed)


def product_coloring(full: PointSet, sub_coloring: Coloring, F) -> Coloring:
    """Color ``x`` by ``(j, c)`` where ``j`` is the least index with ``x - t_j`` in the sub set
    and ``c`` the color of ``x - t_j``; encoded as ``j*r + c``.
    """
    r = sub_coloring.r
    elems = full.elements()
    cols = np.full(len(full), -1, dtype=np.int64)
    for j, t in enumerate(F):
        for i, x in enumerate(elems):
            if cols[i] >= 0:
                continue
            y = x - t if not isinstance(x, tuple) else tuple(a - b for a, b in zip(x, t))
            try:
                cols[i] = j * r + sub_coloring(y)
            except KeyError:
                pass
    if (cols < 0).any():
        raise ValueError("F does not cover every point of the full fragment")
    return Coloring(full, cols, len(F) * r, "product")


def _ball_mask(ps: PointSet, center, radius: float) -> np.ndarray:
    c = np.atleast_1d(np.asarray(center, dtype=float))
    return np.linalg.norm(ps.phys - c, axis=1) <= radius


def find_monochromatic_ap(ps: PointSet, coloring: Coloring, k: int, center, radius: float) -> Progression | None:
    """A monochromatic ``k``-term progression inside the closed ball, or None."""
    c = np.atleast_1d(np.asarray(center, dtype=float))
    ball = tuple((as_fraction(float(v) - radius), as_fraction(float(v) + radius)) for v in c)
    if not region_contains(ps.region, as_region(ball, ps.dim)):
        raise ValueError("ball is not covered by the fragment")
    inside = _ball_mask(ps, c, radius)
    for col in range(coloring.r):
        sub = ps.take(inside & (coloring.colors == col))
        hits = find_aps_bruteforce(sub, k, limit=1)
        if hits:
            h = hits[0]
            return Progression(h.start, h.diff, k, cps=ps.cps)
    return None


# -- radii -------------------------------------------------------------------------

@dataclass(frozen=True)
class VdwRadius:
    """Ball radius for monochromatic k-APs under r colorings.

    ``N`` is the integer van der Waerden length behind it.  ``exact`` is
    False when the oracle guard was hit and ``N`` is only a lower bound,
    in which case ``radius`` under-reports the guaranteed radius.
    """

    radius: float
    N: int
    colors: int
    k: int
    exact: bool
    shift: float = 0.0

    def __float__(self) -> float:
        return self.radius


def model_vdw_radius(cps: CpsDescriptor, window: Window, r: int, k: int,
                     n_max: int = ORACLE_GUARD) -> VdwRadius:
    """``bounded_gap_radius(N - 1)`` with ``N = W(r, k)``, so every ball holds N-term progressions."""
    res = vdw_number_oracle(r, k, n_max)
    if res.exceeds:
        raise GuardExceeded(f"W({r},{k}) exceeds {n_max}")
    N = res.number
    return VdwRadius(bounded_gap_radius(cps, window, N - 1), N, r, k, True)


def meyer_vdw_radius(meyer: PointSet, cps: CpsDescriptor, window: Window, F, r: int, k: int,
                     full: PointSet | None = None, region=None, n_max: int = ORACLE_GUARD) -> VdwRadius:
    """``R' + max |t_j|`` where ``R'`` serves ``|F|*r`` colors on the covering model set.

    The cover ``full ∩ region ⊆ meyer + F`` is verified first.  If
    ``W(|F|*r, k)`` exceeds the oracle guard, ``R'`` is computed with
    ``N = n_max + 1`` and the result is flagged inexact: a lower bound on
    the guaranteed radius, so progressions found inside it are still found
    inside the true ball.
    """
    from .cps import enumerate_model_set

    if full is None:
        full = enumerate_model_set(cps, window, meyer.region)
    if not check_cover(meyer, full, F, region):
        raise ValueError("F does not cover the model set on the region")
    colors = len(F) * r
    res = vdw_number_oracle(colors, k, n_max)
    N, exact = (n_max + 1, False) if res.exceeds else (res.number, True)
    shift = max(element_norm(t) for t in F)
    R1 = bounded_gap_radius(cps, window, N - 1)
    return VdwRadius(R1 + shift, N, colors, k, exact, shift)


# -- certificates ------------------------------------------------------------------

@dataclass(frozen=True)
class TraceEntry:
    center: float
    coloring: str
    found: Progression | None
    reduced: Progression | None
    carrier: Progression | None

    @property
    def ok(self) -> bool:
        return self.found is not None


@dataclass(frozen=True)
class VdwCertificate:
    r: int
    k: int
    N: int
    R: float
    trace: tuple[TraceEntry, ...]

    @property
    def failures(self) -> list[TraceEntry]:
        return [e for e in self.trace if not e.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        def rec(p):
            return None if p is None else p.to_record()

        return {
            "r": self.r, "k": self.k, "N": self.N, "R": self.R, "ok": self.ok,
            "trace": [{"center": e.center, "coloring": e.coloring, "found": rec(e.found),
                       "reduced": rec(e.reduced)} for e in self.trace],
        }


def _reduce_through_carrier(carrier: Progression, coloring: Coloring, k: int) -> Progression | None:
    """Color the carrier's indices by the colors of its terms and pull back an integer k-AP."""
    terms = carrier.terms()
    idx_colors = [coloring(x) for x in terms]
    hit = integer_mono_ap(idx_colors, k)
    if hit is None:
        return None
    s, d = hit
    return Progression(terms[s], d * carrier.diff, k, cps=carrier.cps)


def certify_model_vdw(cps: CpsDescriptor, window: Window, ps: PointSet, colorings, k: int,
                      centers, radius: VdwRadius) -> VdwCertificate:
    """Search every (coloring, center) ball for a monochromatic k-AP.

    Alongside the direct search, each entry records the progression obtained
    by the integer reduction: an ``N``-term carrier progression inside the
    ball, its index coloring, and the integer monochromatic AP mapped back.
    """
    trace = []
    for col in colorings:
        for x in centers:
            found = find_monochromatic_ap(ps, col, k, x, radius.radius)
            carrier = reduced = None
            if radius.exact:
                carrier = bounded_gap_ap(cps, window, radius.N - 1, x)
                reduced = _reduce_through_carrier(carrier, col, k)
            trace.append(TraceEntry(float(x), col.label, found, reduced, carrier))
    return VdwCertificate(colorings[0].r if colorings else 0, k, radius.N, radius.radius, tuple(trace))
