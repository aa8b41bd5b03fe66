"""Windows in internal space: intervals, boxes and balls.

Endpoints, centres and radii are stored exactly (``int``, ``Fraction`` or
:class:`QuadElem`); floats are accepted and read through their shortest
decimal repr.  Float views (``bbox``, ``margin_array``) exist for the
numeric enumeration path only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .quadratic import QuadElem, as_fraction

__all__ = ["Interval", "Box", "Ball", "Window", "exact"]

Scalar = Union[int, Fraction, QuadElem]


def exact(x) -> Scalar:
    if isinstance(x, QuadElem):
        return x
    f = as_fraction(x)
    return f.numerator if f.denominator == 1 else f


def _fmt(x) -> str:
    return str(x)


@dataclass(frozen=True)
class Interval:
    """An interval with independently open or closed ends (default ``[lo, hi)``)."""

    lo: Scalar
    hi: Scalar
    closed_lo: bool = True
    closed_hi: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", exact(self.lo))
        object.__setattr__(self, "hi", exact(self.hi))
        if self.hi < self.lo:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    dim = 1

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi) -> Interval:
        return cls(lo, hi, True, True)

    def contains(self, y) -> bool:
        y = exact(y)
        above = self.lo <= y if self.closed_lo else self.lo < y
        below = y <= self.hi if self.closed_hi else y < self.hi
        return bool(above and below)

    __contains__ = contains

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo

    def measure(self) -> float:
        return float(self.length)

    @property
    def has_interior(self) -> bool:
        return self.lo < self.hi

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi and not (self.closed_lo and self.closed_hi)

    @property
    def center(self) -> Scalar:
        return (self.lo + self.hi) / 2

    @property
    def inradius(self) -> Scalar:
        return self.length / 2

    def interior(self) -> Interval:
        return Interval(self.lo, self.hi, False, False)

    def closure(self) -> Interval:
        return Interval(self.lo, self.hi, True, True)

    def translate(self, c) -> Interval:
        c = exact(c)
        return Interval(self.lo + c, self.hi + c, self.closed_lo, self.closed_hi)

    def scale(self, k) -> Interval:
        k = exact(k)
        if not k > 0:
            raise ValueError("scale factor must be positive")
        return Interval(self.lo * k, self.hi * k, self.closed_lo, self.closed_hi)

    def shrink(self, factor) -> Interval:
        """Concentric sub-interval whose length is ``factor`` times the original."""
        factor = exact(factor)
        if not 0 < factor <= 1:
            raise ValueError("shrink factor must lie in (0, 1]")
        half = self.length * factor / 2
        c = self.center
        return Interval(c - half, c + half, self.closed_lo, self.closed_hi)

    def minkowski_sum(self, other: Interval) -> Interval:
        return Interval(
            self.lo + other.lo,
            self.hi + other.hi,
            self.closed_lo and other.closed_lo,
            self.closed_hi and other.closed_hi,
        )

    def __add__(self, other):
        if isinstance(other, Interval):
            return self.minkowski_sum(other)
        return NotImplemented

    def distance_to_boundary(self, y) -> Scalar:
        y = exact(y)
        a, b = y - self.lo, self.hi - y
        return a if a < b else b

    def bbox(self) -> tuple[tuple[float, float], ...]:
        return ((float(self.lo), float(self.hi)),)

    def margin_array(self, y: np.ndarray) -> np.ndarray:
        """Signed float distance of each row of ``y`` into the window."""
        y = np.asarray(y, dtype=float).reshape(len(y), -1)[:, 0]
        return np.minimum(y - float(self.lo), float(self.hi) - y)

    def contains_rational(self, y: tuple) -> bool:
        return self.contains(y[0])

    def as_interval(self) -> Interval:
        return self

    def __str__(self) -> str:
        lb = "[" if self.closed_lo else "("
        rb = "]" if self.closed_hi else ")"
        return f"{lb}{_fmt(self.lo)}, {_fmt(self.hi)}{rb}"


@dataclass(frozen=True)
class Box:
    """Product of intervals."""

    factors: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("box needs at least one factor")

    @classmethod
    def from_bounds(cls, bounds, closed_lo=True, closed_hi=False) -> Box:
        return cls(tuple(Interval(lo, hi, closed_lo, closed_hi) for lo, hi in bounds))

    @property
    def dim(self) -> int:
        return len(self.factors)

    def contains(self, y) -> bool:
        y = tuple(y) if not isinstance(y, (int, Fraction, QuadElem, float)) else (y,)
        if len(y) != self.dim:
            raise ValueError("dimension mismatch")
        return all(f.contains(v) for f, v in zip(self.factors, y))

    __contains__ = contains
    contains_rational = contains

    def measure(self) -> float:
        return math.prod(f.measure() for f in self.factors)

    @property
    def has_interior(self) -> bool:
        return all(f.has_interior for f in self.factors)

    @property
    def center(self) -> tuple:
        return tuple(f.center for f in self.factors)

    @property
    def inradius(self) -> Scalar:
        return min(f.inradius for f in self.factors)

    def interior(self) -> Box:
        return Box(tuple(f.interior() for f in self.factors))

    def translate(self, c) -> Box:
        c = tuple(c) if np.ndim(c) else (c,) * self.dim
        return Box(tuple(f.translate(v) for f, v in zip(self.factors, c)))

    def scale(self, k) -> Box:
        return Box(tuple(f.scale(k) for f in self.factors))

    def shrink(self, factor) -> Box:
        return Box(tuple(f.shrink(factor) for f in self.factors))

    def minkowski_sum(self, other: Box) -> Box:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Box(tuple(a.minkowski_sum(b) for a, b in zip(self.factors, other.factors)))

    def distance_to_boundary(self, y) -> Scalar:
        y = tuple(y) if np.ndim(y) else (y,)
        return min(f.distance_to_boundary(v) for f, v in zip(self.factors, y))

    def bbox(self):
        return tuple(f.bbox()[0] for f in self.factors)

    def margin_array(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float).reshape(len(y), -1)
        lo = np.array([float(f.lo) for f in self.factors])
        hi = np.array([float(f.hi) for f in self.factors])
        return np.minimum(y - lo, hi - y).min(axis=1)

    def as_interval(self) -> Interval:
        if self.dim != 1:
            raise ValueError("only one-dimensional boxes are intervals")
        return self.factors[0]

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class Ball:
    """Euclidean ball, open unless ``closed`` is set."""

    center: tuple
    radius: Scalar
    closed: bool = False

    def __post_init__(self):
        c = self.center
        c = tuple(c) if np.ndim(c) or isinstance(c, (tuple, list)) else (c,)
        object.__setattr__(self, "center", tuple(exact(v) for v in c))
        object.__setattr__(self, "radius", exact(self.radius))
        if self.radius < 0:
            raise ValueError("negative radius")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, y) -> bool:
        y = tuple(y) if np.ndim(y) or isinstance(y, (tuple, list)) else (y,)
        if self.dim == 1:
            d = exact(y[0]) - self.center[0]
            d = -d if d < 0 else d
            return bool(d <= self.radius if self.closed else d < self.radius)
        d2 = sum((exact(v) - c) ** 2 for v, c in zip(y, self.center))
        r2 = self.radius * self.radius
        return bool(d2 <= r2 if self.closed else d2 < r2)

    __contains__ = contains
    contains_rational = contains

    def measure(self) -> float:
        d = self.dim
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * float(self.radius) ** d

    @property
    def has_interior(self) -> bool:
        return self.radius > 0

    @property
    def inradius(self) -> Scalar:
        return self.radius

    def interior(self) -> Ball:
        return Ball(self.center, self.radius, False)

    def translate(self, c) -> Ball:
        c = tuple(c) if np.ndim(c) else (c,) * self.dim
        return Ball(tuple(a + exact(b) for a, b in zip(self.center, c)), self.radius, self.closed)

    def scale(self, k) -> Ball:
        k = exact(k)
        return Ball(tuple(a * k for a in self.center), self.radius * k, self.closed)

    def shrink(self, factor) -> Ball:
        return Ball(self.center, self.radius * exact(factor), self.closed)

    def minkowski_sum(self, other: Ball) -> Ball:
        return Ball(
            tuple(a + b for a, b in zip(self.center, other.center)),
            self.radius + other.radius,
            self.closed and other.closed,
        )

    def distance_to_boundary(self, y):
        y = tuple(y) if np.ndim(y) or isinstance(y, (tuple, list)) else (y,)
        if self.dim == 1:
            d = exact(y[0]) - self.center[0]
            return self.radius - (-d if d < 0 else d)
        dist = math.sqrt(sum(float(exact(v) - c) ** 2 for v, c in zip(y, self.center)))
        return float(self.radius) - dist

    def bbox(self):
        r = float(self.radius)
        return tuple((float(c) - r, float(c) + r) for c in self.center)

    def margin_array(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float).reshape(len(y), -1)
        c = np.array([float(v) for v in self.center])
        return float(self.radius) - np.linalg.norm(y - c, axis=1)

    def as_interval(self) -> Interval:
        if self.dim != 1:
            raise ValueError("only one-dimensional balls are intervals")
        c, r = self.center[0], self.radius
        return Interval(c - r, c + r, self.closed, self.closed)

    def __str__(self) -> str:
        b = "closed" if self.closed else "open"
        return f"{b} ball(center={tuple(str(c) for c in self.center)}, r={self.radius})"


Window = Union[Interval, Box, Ball]
