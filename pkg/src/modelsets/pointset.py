"""Cut-and-project schemes and finite point-set fragments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .quadratic import GOLDEN, QuadElem, QuadRing, as_fraction, sign_minus_array

__all__ = ["CpsDescriptor", "PointSet", "Region", "as_region", "pack_keys"]

# Points closer than this (in float mode) are considered identical.
DUP_TOL = 1e-12
# Float decisions this close to a boundary are re-checked exactly.
_EXACT_BAND = 1e-7


@dataclass(frozen=True)
class CpsDescriptor:
    """A cut-and-project scheme.

    ``algebraic`` mode: d = 1, lattice ``{(x, x*) : x in Z[w]}`` for a real
    quadratic ring; lattice coordinates are ``(m, n)`` with ``x = m + n*w``.

    ``numeric`` mode: the lattice spanned by the rows of ``basis`` (exact
    rationals) in ``R^physical_dim x R^internal_dim``; lattice coordinates
    are the integer row combinations.
    """

    physical_dim: int
    internal_dim: int
    ring: QuadRing | None = None
    basis: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if (self.ring is None) == (self.basis is None):
            raise ValueError("give exactly one of ring (algebraic) or basis (numeric)")
        if self.ring is not None and (self.physical_dim, self.internal_dim) != (1, 1):
            raise ValueError("algebraic mode is one-dimensional")
        if self.basis is not None:
            B = tuple(tuple(as_fraction(v) for v in row) for row in self.basis)
            n = self.physical_dim + self.internal_dim
            if len(B) != n or any(len(r) != n for r in B):
                raise ValueError(f"basis must be {n}x{n}")
            object.__setattr__(self, "basis", B)
            if _det_fraction(B) == 0:
                raise ValueError("basis matrix is singular")

    @classmethod
    def golden(cls) -> CpsDescriptor:
        return cls(1, 1, ring=GOLDEN)

    @classmethod
    def algebraic(cls, ring: QuadRing) -> CpsDescriptor:
        return cls(1, 1, ring=ring)

    @classmethod
    def numeric(cls, basis, physical_dim: int) -> CpsDescriptor:
        basis = [list(r) for r in basis]
        return cls(physical_dim, len(basis) - physical_dim, basis=tuple(tuple(r) for r in basis))

    @property
    def mode(self) -> str:
        return "algebraic" if self.ring is not None else "numeric"

    @property
    def is_golden(self) -> bool:
        return self.ring == GOLDEN

    @property
    def coord_dim(self) -> int:
        return 2 if self.ring is not None else len(self.basis)

    @property
    def covolume(self) -> float:
        if self.ring is not None:
            return self.ring.sqrt_d
        return abs(float(_det_fraction(self.basis)))

    @property
    def lattice_density(self) -> float:
        """``dens(L) = 1/covolume``, the normalisation used for maximal density."""
        return 1.0 / self.covolume

    # -- coordinate maps ---------------------------------------------------
    def _basis_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.basis])

    def _basis_scaled(self) -> tuple[np.ndarray, int]:
        den = math.lcm(*(v.denominator for row in self.basis for v in row))
        B = np.array([[int(v * den) for v in row] for row in self.basis], dtype=object)
        return B, den

    def phys_of(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords).reshape(-1, self.coord_dim)
        if self.ring is not None:
            p, _ = _quad_floats(coords, self.ring)
            return p[:, None]
        return coords.astype(float) @ self._basis_float()[:, : self.physical_dim]

    def star_of(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords).reshape(-1, self.coord_dim)
        if self.ring is not None:
            _, s = _quad_floats(coords, self.ring)
            return s[:, None]
        return coords.astype(float) @ self._basis_float()[:, self.physical_dim :]

    def exact_point(self, coords) -> tuple:
        """Exact (phys, internal) of one lattice point; rationals in numeric mode."""
        coords = tuple(int(c) for c in coords)
        if self.ring is not None:
            x = QuadElem(coords[0], coords[1], self.ring)
            return (x,), (x.conj(),)
        vec = [sum(c * row[j] for c, row in zip(coords, self.basis)) for j in range(len(self.basis))]
        return tuple(vec[: self.physical_dim]), tuple(vec[self.physical_dim :])

    def element(self, coords) -> QuadElem:
        if self.ring is None:
            raise ValueError("numeric CPS has no ring elements")
        m, n = (int(c) for c in coords)
        return QuadElem(m, n, self.ring)

    def coords_of(self, x) -> tuple[int, ...]:
        """Lattice coordinates of ``x`` (QuadElem in algebraic mode, int vector otherwise)."""
        if self.ring is not None:
            if isinstance(x, (int, np.integer)):
                x = QuadElem(int(x), 0, self.ring)
            if not isinstance(x, QuadElem):
                m, n = x
                return (int(m), int(n))
            return x.coords
        return tuple(int(c) for c in x)

    def __str__(self) -> str:
        if self.ring is not None:
            return "golden" if self.is_golden else f"quadratic(a={self.ring.a}, b={self.ring.b})"
        return f"numeric(d={self.physical_dim}, m={self.internal_dim})"


def _det_fraction(B) -> Fraction:
    M = [list(r) for r in B]
    n = len(M)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            f = M[r][i] / M[i][i]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    return det


def _quad_floats(coords: np.ndarray, ring: QuadRing) -> tuple[np.ndarray, np.ndarray]:
    """Accurate floats of ``m + n*w`` and ``m + n*w'`` for integer rows ``(m, n)``."""
    m = coords[:, 0].astype(float)
    n = coords[:, 1].astype(float)
    phys = m + n * ring.omega
    star = m + n * ring.omega_conj
    if len(coords) == 0:
        return phys, star
    mi = coords[:, 0].astype(object)
    ni = coords[:, 1].astype(object)
    norm = (mi * mi + ring.a * mi * ni - ring.b * ni * ni).astype(float)
    # the smaller of |x|, |x'| suffers cancellation; recover it from the norm
    use_p = np.abs(phys) < np.abs(star)
    with np.errstate(divide="ignore", invalid="ignore"):
        phys = np.where(use_p & (star != 0), norm / np.where(star == 0, 1, star), phys)
        star = np.where(~use_p & (phys != 0), norm / np.where(phys == 0, 1, phys), star)
    return phys, star


# -- regions -----------------------------------------------------------------

Region = tuple  # tuple of (lo, hi) per physical dimension, exact scalars


def as_region(region, dim: int = 1) -> Region:
    """Normalise ``(lo, hi)`` or ``((lo, hi), ...)`` into a tuple of exact pairs."""
    if region is None:
        raise ValueError("region required")
    r = tuple(region)
    if len(r) == 2 and not isinstance(r[0], (tuple, list, np.ndarray)):
        r = (r,)
    if len(r) != dim:
        raise ValueError(f"region has dimension {len(r)}, expected {dim}")
    out = []
    for lo, hi in r:
        lo = lo if isinstance(lo, QuadElem) else as_fraction(lo)
        hi = hi if isinstance(hi, QuadElem) else as_fraction(hi)
        if not math.isfinite(float(lo)) or not math.isfinite(float(hi)):
            raise ValueError("unbounded region")
        if hi < lo:
            raise ValueError("region bounds out of order")
        out.append((lo, hi))
    return tuple(out)


def region_float(region: Region) -> np.ndarray:
    return np.array([[float(lo), float(hi)] for lo, hi in region])


def region_contains(outer: Region, inner: Region) -> bool:
    return all(olo <= ilo and ihi <= ohi for (olo, ohi), (ilo, ihi) in zip(outer, inner))


def region_expand(region: Region, margin) -> Region:
    margin = as_fraction(margin) if not isinstance(margin, QuadElem) else margin
    return tuple((lo - margin, hi + margin) for lo, hi in region)


# -- keys ---------------------------------------------------------------------

def pack_keys(*arrays: np.ndarray) -> list[np.ndarray]:
    """Map integer coordinate rows of several arrays to comparable 1-D keys."""
    arrays = [np.asarray(a).reshape(len(a), -1) for a in arrays]
    nonempty = [a for a in arrays if len(a)]
    if not nonempty:
        return [np.zeros(0, dtype=np.int64) for _ in arrays]
    allrows = np.concatenate(nonempty)
    lo = allrows.min(axis=0).astype(object)
    span = (allrows.max(axis=0).astype(object) - lo) + 1
    total = 1
    for s in span:
        total *= int(s)
    out = []
    if total < 2**62:
        lo64 = np.array([int(v) for v in lo], dtype=np.int64)
        mult = np.ones(len(span), dtype=np.int64)
        for j in range(len(span) - 2, -1, -1):
            mult[j] = mult[j + 1] * int(span[j + 1])
        for a in arrays:
            out.append(((a.astype(np.int64) - lo64) * mult).sum(axis=1) if len(a) else np.zeros(0, np.int64))
        return out
    for a in arrays:
        out.append(np.array([hash(tuple(int(v) for v in row)) for row in a], dtype=np.int64))
    return out


# -- point sets ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PointSet:
    """A finite fragment of a point set in R^d, sorted lexicographically by ``phys``.

    ``coords`` holds exact integer lattice coordinates when known: ``(m, n)``
    for an algebraic CPS, basis combinations for a numeric CPS, or the points
    themselves for subsets of Z^d (``cps is None``).  ``region`` is the closed
    box on which the fragment is complete.
    """

    phys: np.ndarray
    region: Region
    coords: np.ndarray | None = None
    internal: np.ndarray | None = None
    cps: CpsDescriptor | None = None
    boundary_uncertain: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_coords(cls, coords, cps: CpsDescriptor | None, region, provenance=None,
                    boundary_uncertain=None) -> PointSet:
        coords = np.asarray(coords, dtype=np.int64)
        dim = cps.physical_dim if cps is not None else (coords.shape[1] if coords.ndim == 2 else 1)
        width = cps.coord_dim if cps is not None else dim
        coords = coords.reshape(-1, width)
        region = as_region(region, dim)
        if len(coords):
            keys = pack_keys(coords)[0]
            _, first = np.unique(keys, return_index=True)
            keep = np.sort(first)
            coords = coords[keep]
            if boundary_uncertain is not None:
                boundary_uncertain = np.asarray(boundary_uncertain, bool)[keep]
        if cps is None:
            phys = coords.astype(float)
            internal = None
        else:
            phys = cps.phys_of(coords)
            internal = cps.star_of(coords)
        order = np.lexsort(phys.T[::-1]) if len(phys) else np.zeros(0, int)
        return cls(
            phys=phys[order],
            region=region,
            coords=coords[order],
            internal=None if internal is None else internal[order],
            cps=cps,
            boundary_uncertain=None if boundary_uncertain is None else boundary_uncertain[order],
            provenance=dict(provenance or {}),
        )

    @classmethod
    def from_integers(cls, values, region=None, provenance=None) -> PointSet:
        """A subset of Z (or Z^d for 2-D input) with exact coordinates."""
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if region is None:
            region = _hull(arr.astype(float))
        return cls.from_coords(arr, None, region, provenance)

    @classmethod
    def from_elements(cls, elems: Iterable[QuadElem], region=None, cps=None) -> PointSet:
        elems = list(elems)
        cps = cps or CpsDescriptor.algebraic(elems[0].ring if elems else GOLDEN)
        coords = np.array([e.coords for e in elems], dtype=np.int64).reshape(-1, 2)
        if region is None:
            region = (min(elems), max(elems)) if elems else (0, 0)
        return cls.from_coords(coords, cps, region)

    @classmethod
    def from_floats(cls, values, region=None, provenance=None) -> PointSet:
        """A point set known only through float coordinates."""
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if region is None:
            region = _hull(arr)
        order = np.lexsort(arr.T[::-1]) if len(arr) else np.zeros(0, int)
        arr = arr[order]
        if len(arr) > 1:
            if arr.shape[1] == 1:
                keep = np.concatenate([[True], np.diff(arr[:, 0]) > DUP_TOL])
            else:
                from scipy.spatial import cKDTree

                pairs = cKDTree(arr).query_pairs(DUP_TOL)
                drop = {max(p) for p in pairs}
                keep = np.array([i not in drop for i in range(len(arr))])
            arr = arr[keep]
        return cls(phys=arr, region=as_region(region, arr.shape[1]), provenance=dict(provenance or {}))

    # -- basic views ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.phys)

    def __repr__(self) -> str:
        src = str(self.cps) if self.cps is not None else ("Z^d" if self.coords is not None else "float")
        return f"PointSet(n={len(self)}, dim={self.dim}, source={src}, region={self.region_float().tolist()})"

    @property
    def dim(self) -> int:
        return self.phys.shape[1]

    @property
    def x(self) -> np.ndarray:
        """1-D physical coordinates."""
        if self.dim != 1:
            raise ValueError("x is only defined for one-dimensional point sets")
        return self.phys[:, 0]

    @property
    def exact(self) -> bool:
        return self.coords is not None

    def region_float(self) -> np.ndarray:
        return region_float(self.region)

    def elements(self) -> list:
        """Exact points: QuadElem (algebraic), int tuples (Z^d / numeric), floats otherwise."""
        if self.coords is None:
            return [tuple(p) if self.dim > 1 else float(p[0]) for p in self.phys]
        if self.cps is not None and self.cps.ring is not None:
            ring = self.cps.ring
            return [QuadElem(int(m), int(n), ring) for m, n in self.coords]
        return [tuple(int(v) for v in row) for row in self.coords]

    def point(self, i: int):
        return self.elements_at([i])[0]

    def elements_at(self, idx) -> list:
        if self.coords is None:
            return [float(self.phys[i, 0]) if self.dim == 1 else tuple(self.phys[i]) for i in idx]
        if self.cps is not None and self.cps.ring is not None:
            return [QuadElem(int(self.coords[i, 0]), int(self.coords[i, 1]), self.cps.ring) for i in idx]
        return [tuple(int(v) for v in self.coords[i]) for i in idx]

    def _replace(self, **kw) -> PointSet:
        d = dict(phys=self.phys, region=self.region, coords=self.coords, internal=self.internal,
                 cps=self.cps, boundary_uncertain=self.boundary_uncertain, provenance=self.provenance)
        d.update(kw)
        return PointSet(**d)

    def take(self, mask_or_idx, region=None) -> PointSet:
        sel = np.asarray(mask_or_idx)
        return self._replace(
            phys=self.phys[sel],
            coords=None if self.coords is None else self.coords[sel],
            internal=None if self.internal is None else self.internal[sel],
            boundary_uncertain=None if self.boundary_uncertain is None else self.boundary_uncertain[sel],
            region=self.region if region is None else as_region(region, self.dim),
        )

    # -- exact geometry --------------------------------------------------------
    def _compare(self, idx: np.ndarray, axis: int, bound) -> np.ndarray:
        """Exact sign of phys[idx, axis] - bound."""
        if self.coords is None:
            return np.sign(self.phys[idx, axis] - float(bound)).astype(np.int8)
        c = self.coords[idx]
        if self.cps is not None and self.cps.ring is not None:
            b = QuadElem.coerce(bound, self.cps.ring)
            return sign_minus_array(c[:, 0], c[:, 1], b)
        b = bound if not isinstance(bound, QuadElem) else None
        if b is None:
            return np.array([(float(v) > float(bound)) - (float(v) < float(bound))
                             for v in self.phys[idx, axis]], dtype=np.int8)
        b = as_fraction(b)
        if self.cps is None:
            vals = [Fraction(int(v)) for v in c[:, axis]]
        else:
            B, den = self.cps._basis_scaled()
            vals = [Fraction(int(v), den) for v in (c.astype(object) @ B[:, axis])]
        return np.array([(v > b) - (v < b) for v in vals], dtype=np.int8)

    def box_mask(self, box: Region, closed: bool = True) -> np.ndarray:
        """Points inside the (closed by default) box; exact near the faces."""
        box = as_region(box, self.dim)
        mask = np.ones(len(self), dtype=bool)
        for axis, (lo, hi) in enumerate(box):
            v = self.phys[:, axis]
            flo, fhi = float(lo), float(hi)
            band = _EXACT_BAND * max(1.0, abs(flo), abs(fhi))
            for bound, fb, side in ((lo, flo, 1), (hi, fhi, -1)):
                diff = (v - fb) * side
                ok = diff > band
                unsure = np.abs(diff) <= band
                if unsure.any():
                    idx = np.flatnonzero(unsure)
                    s = self._compare(idx, axis, bound) * side
                    ok[idx] = (s >= 0) if closed else (s > 0)
                mask &= ok
        return mask

    def restrict(self, box, closed: bool = True) -> PointSet:
        box = as_region(box, self.dim)
        return self.take(self.box_mask(box, closed), region=box)

    def translate(self, t) -> PointSet:
        """``t + self``; ``t`` is a QuadElem / coordinate vector for exact sets, floats otherwise."""
        if self.coords is not None and not isinstance(t, (float, np.floating)):
            if self.cps is not None and self.cps.ring is not None:
                te = t if isinstance(t, QuadElem) else QuadElem.coerce(t, self.cps.ring) if np.ndim(t) == 0 \
                    else QuadElem(int(t[0]), int(t[1]), self.cps.ring)
                tc = np.array(te.coords, dtype=np.int64)
                shift = [(te, te)]
            else:
                tc = np.asarray(t, dtype=np.int64).reshape(-1)
                if self.cps is None:
                    shift = [(int(v), int(v)) for v in tc]
                else:
                    ph, _ = self.cps.exact_point(tc)
                    shift = [(v, v) for v in ph]
            coords = self.coords + tc
            # shift the cached floats; exact decisions go through coords anyway
            if self.cps is None:
                phys, internal = coords.astype(float), None
            else:
                one = tc[None, :]
                phys = self.phys + self.cps.phys_of(one)[0]
                internal = self.internal + self.cps.star_of(one)[0]
            region = tuple((lo + s, hi + s) for (lo, hi), (s, _) in zip(self.region, shift))
            return self._replace(phys=phys, coords=coords, internal=internal, region=region)
        tv = np.asarray(t, dtype=float).reshape(-1)
        region = tuple((lo + as_fraction(float(s)), hi + as_fraction(float(s)))
                       for (lo, hi), s in zip(self.region, tv))
        return self._replace(phys=self.phys + tv, coords=None, internal=None, region=region)

    def isin(self, other: PointSet, tol: float = 1e-9) -> np.ndarray:
        """Mask of points of ``self`` that also belong to ``other``."""
        if self.coords is not None and other.coords is not None and _same_lattice(self, other):
            a, b = pack_keys(self.coords, other.coords)
            return np.isin(a, b)
        if self.dim == 1:
            xs, ys = self.x, np.sort(other.x)
            if len(ys) == 0:
                return np.zeros(len(xs), bool)
            j = np.clip(np.searchsorted(ys, xs), 1, len(ys) - 1) if len(ys) > 1 else np.zeros(len(xs), int)
            near = np.minimum(np.abs(ys[j] - xs), np.abs(ys[np.maximum(j - 1, 0)] - xs))
            return near <= tol
        from scipy.spatial import cKDTree

        if len(other) == 0:
            return np.zeros(len(self), bool)
        d, _ = cKDTree(other.phys).query(self.phys)
        return d <= tol

    def key_list(self) -> list[int]:
        return pack_keys(self.coords)[0].tolist()


def _same_lattice(a: PointSet, b: PointSet) -> bool:
    return a.cps == b.cps and a.coords.shape[1] == b.coords.shape[1]


def _hull(arr: np.ndarray) -> Region:
    if len(arr) == 0:
        return tuple((0, 0) for _ in range(arr.shape[1] if arr.ndim == 2 else 1))
    return tuple((float(lo), float(hi)) for lo, hi in zip(arr.min(axis=0), arr.max(axis=0)))


def union(sets: Sequence[PointSet]) -> PointSet:
    """Union of fragments of the same kind; the region is the first set's."""
    first = sets[0]
    if all(s.coords is not None for s in sets) and all(_same_lattice(first, s) for s in sets):
        coords = np.concatenate([s.coords for s in sets])
        return PointSet.from_coords(coords, first.cps, first.region, first.provenance)
    return PointSet.from_floats(np.concatenate([s.phys for s in sets]), first.region)
