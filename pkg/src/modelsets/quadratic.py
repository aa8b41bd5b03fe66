"""Exact arithmetic in real quadratic fields Q(w), w**2 = a*w + b.

Lattice points of an algebraic cut-and-project scheme are ring elements
``m + n*w`` with integer ``m, n``; window endpoints and difference windows
live in the field and may carry rational coefficients.  Every comparison is
decided exactly from the sign of ``A + B*sqrt(D)`` with integer ``A, B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

import numpy as np

__all__ = [
    "QuadRing",
    "QuadElem",
    "GOLDEN",
    "TAU",
    "as_fraction",
    "sign_sqrt",
    "sign_sqrt_array",
    "sign_minus_array",
]


@dataclass(frozen=True)
class QuadRing:
    """The ring Z[w] for w the larger root of ``x**2 - a*x - b``."""

    a: int
    b: int

    def __post_init__(self):
        D = self.discriminant
        if D <= 0 or math.isqrt(D) ** 2 == D:
            raise ValueError(f"x^2 - {self.a}x - {self.b} does not define a real quadratic field")

    @property
    def discriminant(self) -> int:
        return self.a * self.a + 4 * self.b

    @property
    def sqrt_d(self) -> float:
        return math.sqrt(self.discriminant)

    @property
    def omega(self) -> float:
        return (self.a + self.sqrt_d) / 2

    @property
    def omega_conj(self) -> float:
        return (self.a - self.sqrt_d) / 2

    def __call__(self, m=0, n=0) -> QuadElem:
        return QuadElem(m, n, self)

    def __repr__(self) -> str:
        if self == GOLDEN:
            return "GOLDEN"
        return f"QuadRing(a={self.a}, b={self.b})"


GOLDEN = QuadRing(1, 1)

Number = Union[int, Fraction, "QuadElem"]


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats are read through their shortest repr."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(float(x)))
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _norm_coef(x) -> int | Fraction:
    f = as_fraction(x)
    return f.numerator if f.denominator == 1 else f


def sign_sqrt(A: int, B: int, D: int) -> int:
    """Sign of ``A + B*sqrt(D)`` for integers ``A, B`` and non-square ``D > 0``."""
    if A >= 0 and B >= 0:
        return 0 if (A == 0 and B == 0) else 1
    if A <= 0 and B <= 0:
        return -1
    cmp = A * A - D * B * B
    # D non-square, so cmp != 0 whenever A, B are both nonzero
    return (1 if A > 0 else -1) * (1 if cmp > 0 else -1)


def sign_sqrt_array(A: np.ndarray, B: np.ndarray, D: int) -> np.ndarray:
    """Elementwise :func:`sign_sqrt`.

    Runs in int64 when the squares cannot overflow, otherwise on Python
    integers through object arrays.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    small = False
    if A.dtype != object and B.dtype != object:
        amax = int(np.abs(A).max(initial=0))
        bmax = int(np.abs(B).max(initial=0))
        small = amax < 2**30 and D * bmax * bmax < 2**62
    if not small:
        A = A.astype(object)
        B = B.astype(object)
    sA = np.sign(A).astype(np.int8)
    sB = np.sign(B).astype(np.int8)
    cmp = A * A - D * (B * B)
    s_cmp = np.sign(cmp).astype(np.int8)
    out = np.where(sA * sB < 0, sA * s_cmp, np.where(sA != 0, sA, sB))
    return out.astype(np.int8)


def _lcm(*vals: int) -> int:
    out = 1
    for v in vals:
        out = out * v // math.gcd(out, v)
    return out


def sign_minus_array(m: np.ndarray, n: np.ndarray, c: QuadElem) -> np.ndarray:
    """Exact elementwise sign of ``(m + n*w) - c`` for integer arrays ``m, n``."""
    ring = c.ring
    p = as_fraction(c.m)
    q = as_fraction(c.n)
    L = _lcm(p.denominator, q.denominator)
    Lp = p.numerator * (L // p.denominator)
    Lq = q.numerator * (L // q.denominator)
    m = np.asarray(m)
    n = np.asarray(n)
    big = m.dtype == object or n.dtype == object
    if not big:
        mmax = int(np.abs(m).max(initial=0))
        nmax = int(np.abs(n).max(initial=0))
        scale = max(abs(Lp), abs(Lq), L)
        big = 4 * (mmax + (abs(ring.a) + 1) * nmax + 1) * scale > 2**62
    if big:
        m = m.astype(object)
        n = n.astype(object)
    else:
        m = m.astype(np.int64)
        n = n.astype(np.int64)
    v = L * n - Lq
    A = 2 * (L * m - Lp) + ring.a * v
    return sign_sqrt_array(A, v, ring.discriminant)


@total_ordering
class QuadElem:
    """The number ``m + n*w`` of a real quadratic field.

    ``m`` and ``n`` are integers for ring elements and may be rationals for
    general field elements.  Arithmetic and ordering are exact.
    """

    __slots__ = ("m", "n", "ring")

    def __init__(self, m: int | Fraction = 0, n: int | Fraction = 0, ring: QuadRing = GOLDEN):
        object.__setattr__(self, "m", _norm_coef(m))
        object.__setattr__(self, "n", _norm_coef(n))
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem, (self.m, self.n, self.ring))

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> QuadElem | None:
        if isinstance(other, QuadElem):
            if other.ring != self.ring:
                raise ValueError("elements of different quadratic rings")
            return other
        if isinstance(other, (int, Fraction, np.integer)) and not isinstance(other, bool):
            return QuadElem(other, 0, self.ring)
        return None

    @classmethod
    def coerce(cls, x, ring: QuadRing = GOLDEN) -> QuadElem:
        """Exact field element for ``x`` (QuadElem, int, Fraction, float, str)."""
        if isinstance(x, QuadElem):
            if x.ring != ring:
                raise ValueError("elements of different quadratic rings")
            return x
        return cls(as_fraction(x), 0, ring)

    @property
    def is_integral(self) -> bool:
        return isinstance(self.m, int) and isinstance(self.n, int)

    @property
    def coords(self) -> tuple[int, int]:
        if not self.is_integral:
            raise ValueError(f"{self} is not a ring element")
        return (self.m, self.n)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.m + o.m, self.n + o.n, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.m, -self.n, self.ring)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.m - o.m, self.n - o.n, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.ring.a, self.ring.b
        m = self.m * o.m + b * self.n * o.n
        n = self.m * o.n + self.n * o.m + a * self.n * o.n
        return QuadElem(m, n, self.ring)

    __rmul__ = __mul__

    def conj(self) -> QuadElem:
        """Galois conjugate ``m + n*w'`` written back in the basis ``1, w``."""
        return QuadElem(self.m + self.ring.a * self.n, -self.n, self.ring)

    def norm(self) -> int | Fraction:
        a, b = self.ring.a, self.ring.b
        return _norm_coef(self.m * self.m + a * self.m * self.n - b * self.n * self.n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        N = o.norm()
        if N == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conj()
        return QuadElem(Fraction(num.m) / N, Fraction(num.n) / N, self.ring)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadElem(1, 0, self.ring) / self ** (-k)
        out = QuadElem(1, 0, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering ---------------------------------------------------------
    def sign(self) -> int:
        p = as_fraction(self.m)
        q = as_fraction(self.n)
        L = _lcm(p.denominator, q.denominator)
        A = int(2 * p * L + self.ring.a * q * L)
        B = int(q * L)
        return sign_sqrt(A, B, self.ring.discriminant)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, float) else None
        if o is None:
            return NotImplemented
        return self.m == o.m and self.n == o.n

    def __hash__(self):
        if self.n == 0:
            return hash(self.m)
        return hash((self.m, self.n, self.ring))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, float):
                o = QuadElem.coerce(other, self.ring)
            else:
                return NotImplemented
        return (self - o).sign() < 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.m != 0 or self.n != 0

    def floor(self) -> int:
        k = math.floor(float(self))
        while QuadElem(k, 0, self.ring) > self:
            k -= 1
        while QuadElem(k + 1, 0, self.ring) <= self:
            k += 1
        return k

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self) -> float:
        # Evaluate the larger of x, x' directly and the smaller through the
        # norm, which avoids cancellation for elements with tiny value.
        r = self.ring
        direct = float(self.m) + float(self.n) * r.omega
        conj = float(self.m) + float(self.n) * r.omega_conj
        if abs(conj) > abs(direct) and conj != 0.0:
            return float(self.norm()) / conj
        return direct

    # -- display ----------------------------------------------------------
    def __repr__(self) -> str:
        ring = "" if self.ring == GOLDEN else f", {self.ring!r}"
        return f"QuadElem({self.m!r}, {self.n!r}{ring})"

    def __str__(self) -> str:
        sym = "τ" if self.ring == GOLDEN else "w"
        if self.n == 0:
            return str(self.m)
        n = "" if self.n == 1 else "-" if self.n == -1 else f"{self.n}"
        s = f"{n}{sym}"
        if self.m == 0:
            return s
        m = self.m
        return f"{s}{'+' if m > 0 else '-'}{abs(m)}"


TAU = QuadElem(0, 1, GOLDEN)
