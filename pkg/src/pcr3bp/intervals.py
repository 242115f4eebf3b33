"""Outward-rounded interval arithmetic on IEEE-754 doubles.

Rounding policy (uniform across the package, including the compiled
integrator kernels): every elementary operation is evaluated in the default
round-to-nearest mode and the result is then inflated outward by one
``nextafter`` step per endpoint.  Because IEEE add/sub/mul/div/sqrt are
correctly rounded, the computed value is within half an ulp of the exact
one, so a single ulp step in each direction is a sound enclosure.  Additions
and subtractions are sharpened with an exact residual (TwoSum): when the
float result is exact no inflation is applied, which keeps small-integer
arithmetic exact.

Vectorized reductions (dots, matrix products) bound the accumulated
round-off of a length-``n`` sum by ``n * u * sum|terms|`` plus one ulp,
which dominates the classical ``(n-1)u/(1-(n-1)u)`` bound for the sizes
used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, StructureError

__all__ = [
    "Interval",
    "IVector",
    "IMatrix",
    "hull",
    "gauss_solve",
    "gauss_solve_mat",
]

_INF = math.inf
_U = 2.0 ** -53  # unit round-off for binary64


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _sum_residual(a: float, b: float, s: float) -> float:
    # TwoSum: exact a + b == s + residual for any rounding of s = fl(a+b).
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _add_down(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        return _down(s) if s == _INF else s
    return s if _sum_residual(a, b, s) >= 0.0 else _down(s)


def _add_up(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        return _up(s) if s == -_INF else s
    return s if _sum_residual(a, b, s) <= 0.0 else _up(s)


@dataclass(frozen=True, slots=True)
class Interval:
    """A closed interval [lo, hi] of real numbers with float64 endpoints."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise StructureError(f"invalid interval endpoints [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- constructors -------------------------------------------------

    @classmethod
    def point(cls, x: float) -> "Interval":
        """Degenerate interval [x, x]."""
        return cls(x, x)

    @classmethod
    def symmetric(cls, radius: float) -> "Interval":
        """Interval [-radius, radius]."""
        return cls(-radius, radius)

    # -- basic queries ------------------------------------------------

    @property
    def width(self) -> float:
        return _add_up(self.hi, -self.lo)

    @property
    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if math.isfinite(m):
            return m
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def mag(self) -> float:
        """Largest absolute value over the interval."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> float:
        """Smallest absolute value over the interval (0 if it contains 0)."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def is_subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def is_interior_subset(self, other: "Interval") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval":
        if not self.intersects(other):
            raise DomainError(f"empty intersection of {self} and {other}")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    # -- arithmetic ---------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        return Interval(_add_down(self.lo, o.lo), _add_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        return Interval(_add_down(self.lo, -o.hi), _add_up(self.hi, -o.lo))

    def __rsub__(self, other: float) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        p1 = self.lo * o.lo
        p2 = self.lo * o.hi
        p3 = self.hi * o.lo
        p4 = self.hi * o.hi
        return Interval(_down(min(p1, p2, p3, p4)), _up(max(p1, p2, p3, p4)))

    __rmul__ = __mul__

    def __truediv__(self, other: "Interval | float") -> "Interval":
        o = _coerce(other)
        if o.contains_zero():
            raise ZeroDivisionError(f"division by interval {o} containing zero")
        q1 = self.lo / o.lo
        q2 = self.lo / o.hi
        q3 = self.hi / o.lo
        q4 = self.hi / o.hi
        return Interval(_down(min(q1, q2, q3, q4)), _up(max(q1, q2, q3, q4)))

    def __rtruediv__(self, other: float) -> "Interval":
        return _coerce(other) / self

    def sqr(self) -> "Interval":
        """Tight enclosure of x**2 (lower endpoint 0 when 0 is inside)."""
        a = abs(self.lo)
        b = abs(self.hi)
        lo, hi = (min(a, b), max(a, b))
        if self.contains_zero():
            return Interval(0.0, _up(hi * hi))
        return Interval(_down(lo * lo), _up(hi * hi))

    def sqrt(self, clamp_negative: bool = False) -> "Interval":
        """Enclosure of the square root.

        A lower endpoint below zero raises unless ``clamp_negative`` is set,
        in which case it is clamped to 0 (used for section-lift radicands
        that graze zero).
        """
        lo = self.lo
        if lo < 0.0:
            if self.hi < 0.0 or not clamp_negative:
                raise DomainError(f"sqrt of interval {self} below zero")
            lo = 0.0
        rlo = math.sqrt(lo)
        rlo = rlo if rlo * rlo <= lo else _down(rlo)
        rhi = math.sqrt(self.hi)
        rhi = rhi if rhi * rhi >= self.hi else _up(rhi)
        return Interval(max(rlo, 0.0), rhi)

    def pow_int(self, n: int) -> "Interval":
        """Enclosure of x**n for a non-negative integer exponent."""
        if n < 0 or n != int(n):
            raise DomainError(f"pow_int exponent must be a non-negative integer, got {n}")
        if n == 0:
            return Interval(1.0, 1.0)
        if n % 2 == 0:
            return self.sqr().pow_int(n // 2) if n > 2 else self.sqr()
        result = self
        base = self.sqr()
        k = (n - 1) // 2
        while k:
            if k & 1:
                result = result * base
            base = base.sqr()
            k >>= 1
        return result

    __pow__ = pow_int

    # -- set operations ------------------------------------------------

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def inflate(self, radius: float) -> "Interval":
        if radius < 0.0:
            raise DomainError("inflate radius must be non-negative")
        return Interval(_add_down(self.lo, -radius), _add_up(self.hi, radius))

    def split(self, n: int) -> list["Interval"]:
        """Cover the interval by n pieces sharing exact float endpoints."""
        if n < 1:
            raise DomainError("split count must be >= 1")
        cuts = np.linspace(self.lo, self.hi, n + 1)
        cuts[0], cuts[-1] = self.lo, self.hi
        return [Interval(float(a), float(b)) for a, b in zip(cuts[:-1], cuts[1:])]

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(x: "Interval | float") -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(float(x), float(x))


def hull(a: Interval, b: Interval) -> Interval:
    """Interval hull of two intervals."""
    return a.hull(b)


# ----------------------------------------------------------------------
# Array layer: (lo, hi) float64 ndarray pairs with outward rounding.
# ----------------------------------------------------------------------

_EPS_TERMS = np.float64(_U)
_ABS_TINY = np.float64(1e-300)


def _nd_down(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, -np.inf)


def _nd_up(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, np.inf)


def _sum_down(terms: np.ndarray, axis: int) -> np.ndarray:
    s = terms.sum(axis=axis)
    n = terms.shape[axis]
    bound = n * _EPS_TERMS * np.abs(terms).sum(axis=axis) + _ABS_TINY
    return _nd_down(s - bound)


def _sum_up(terms: np.ndarray, axis: int) -> np.ndarray:
    s = terms.sum(axis=axis)
    n = terms.shape[axis]
    bound = n * _EPS_TERMS * np.abs(terms).sum(axis=axis) + _ABS_TINY
    return _nd_up(s + bound)


def _prod_bounds(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _nd_down(lo), _nd_up(hi)


class IVector:
    """Interval vector backed by a pair of float64 arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise StructureError("IVector needs two 1-d arrays of equal length")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise StructureError("invalid IVector endpoints")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_intervals(cls, items: Iterable[Interval]) -> "IVector":
        items = list(items)
        return cls([iv.lo for iv in items], [iv.hi for iv in items])

    @classmethod
    def from_point(cls, x: Sequence[float]) -> "IVector":
        a = np.asarray(x, dtype=np.float64)
        return cls(a.copy(), a.copy())

    def __len__(self) -> int:
        return self.lo.size

    def __getitem__(self, i: int) -> Interval:
        return Interval(float(self.lo[i]), float(self.hi[i]))

    @property
    def components(self) -> list[Interval]:
        return [self[i] for i in range(len(self))]

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> np.ndarray:
        return _nd_up(self.hi - self.lo)

    def max_width(self) -> float:
        return float(self.width.max()) if len(self) else 0.0

    def __add__(self, other: "IVector") -> "IVector":
        if isinstance(other, IVector):
            return IVector(_nd_down(self.lo + other.lo), _nd_up(self.hi + other.hi))
        o = np.asarray(other, dtype=np.float64)
        return IVector(_nd_down(self.lo + o), _nd_up(self.hi + o))

    __radd__ = __add__

    def __sub__(self, other: "IVector") -> "IVector":
        if isinstance(other, IVector):
            return IVector(_nd_down(self.lo - other.hi), _nd_up(self.hi - other.lo))
        o = np.asarray(other, dtype=np.float64)
        return IVector(_nd_down(self.lo - o), _nd_up(self.hi - o))

    def __rsub__(self, other) -> "IVector":
        o = np.asarray(other, dtype=np.float64)
        return IVector(_nd_down(o - self.hi), _nd_up(o - self.lo))

    def __neg__(self) -> "IVector":
        return IVector(-self.hi, -self.lo)

    def scale(self, s: "Interval | float") -> "IVector":
        s = _coerce(s)
        lo, hi = _prod_bounds(self.lo, self.hi, np.float64(s.lo), np.float64(s.hi))
        return IVector(lo, hi)

    __mul__ = scale
    __rmul__ = scale

    def hull(self, other: "IVector") -> "IVector":
        return IVector(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def is_subset(self, other: "IVector") -> bool:
        return bool(np.all(other.lo <= self.lo) and np.all(self.hi <= other.hi))

    def is_interior_subset(self, other: "IVector") -> bool:
        return bool(np.all(other.lo < self.lo) and np.all(self.hi < other.hi))

    def contains_point(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(self.lo <= x) and np.all(x <= self.hi))

    def inflate(self, radius: float) -> "IVector":
        return IVector(_nd_down(self.lo - radius), _nd_up(self.hi + radius))

    def __repr__(self) -> str:
        parts = ", ".join(repr(iv) for iv in self.components)
        return f"IVector({parts})"


class IMatrix:
    """Interval matrix backed by a pair of float64 arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 2:
            raise StructureError("IMatrix needs two 2-d arrays of equal shape")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise StructureError("invalid IMatrix endpoints")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_point(cls, a) -> "IMatrix":
        a = np.asarray(a, dtype=np.float64)
        return cls(a.copy(), a.copy())

    @classmethod
    def identity(cls, n: int) -> "IMatrix":
        return cls.from_point(np.eye(n))

    @property
    def shape(self):
        return self.lo.shape

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def entry(self, i: int, j: int) -> Interval:
        return Interval(float(self.lo[i, j]), float(self.hi[i, j]))

    @property
    def T(self) -> "IMatrix":
        return IMatrix(self.lo.T.copy(), self.hi.T.copy())

    def __add__(self, other: "IMatrix") -> "IMatrix":
        return IMatrix(_nd_down(self.lo + other.lo), _nd_up(self.hi + other.hi))

    def __sub__(self, other: "IMatrix") -> "IMatrix":
        return IMatrix(_nd_down(self.lo - other.hi), _nd_up(self.hi - other.lo))

    def hull(self, other: "IMatrix") -> "IMatrix":
        return IMatrix(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def matvec(self, v: IVector) -> IVector:
        # terms[i, j] = enclosure of A[i, j] * v[j], then a rounded row sum
        lo, hi = _prod_bounds(
            self.lo, self.hi, v.lo[np.newaxis, :], v.hi[np.newaxis, :]
        )
        return IVector(_sum_down(lo, axis=1), _sum_up(hi, axis=1))

    def matmul(self, other: "IMatrix") -> "IMatrix":
        lo, hi = _prod_bounds(
            self.lo[:, :, np.newaxis],
            self.hi[:, :, np.newaxis],
            other.lo[np.newaxis, :, :],
            other.hi[np.newaxis, :, :],
        )
        return IMatrix(_sum_down(lo, axis=1), _sum_up(hi, axis=1))

    def __matmul__(self, other):
        if isinstance(other, IMatrix):
            return self.matmul(other)
        if isinstance(other, IVector):
            return self.matvec(other)
        return NotImplemented

    def scale(self, s: "Interval | float") -> "IMatrix":
        s = _coerce(s)
        lo, hi = _prod_bounds(self.lo, self.hi, np.float64(s.lo), np.float64(s.hi))
        return IMatrix(lo, hi)

    def is_subset(self, other: "IMatrix") -> bool:
        return bool(np.all(other.lo <= self.lo) and np.all(self.hi <= other.hi))

    def inflate(self, radius: float) -> "IMatrix":
        return IMatrix(_nd_down(self.lo - radius), _nd_up(self.hi + radius))

    def max_width(self) -> float:
        return float(_nd_up(self.hi - self.lo).max())

    def __repr__(self) -> str:
        return f"IMatrix(lo={self.lo!r}, hi={self.hi!r})"


def gauss_solve(a: np.ndarray, b: IVector) -> IVector:
    """Rigorous enclosure of the solution of ``a x = b`` for a point matrix.

    Interval Gaussian elimination with partial pivoting; ``a`` must be a
    well-conditioned square float matrix (it is an orthonormal frame in the
    integrator's use).  Raises if a pivot interval touches zero.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n) or len(b) != n:
        raise StructureError("gauss_solve needs a square matrix and a matching vector")
    rows: list[list[Interval]] = [
        [Interval.point(float(a[i, j])) for j in range(n)] for i in range(n)
    ]
    rhs: list[Interval] = list(b.components)
    perm = list(range(n))
    for col in range(n):
        piv = max(range(col, n), key=lambda r: rows[perm[r]][col].mig)
        perm[col], perm[piv] = perm[piv], perm[col]
        prow = rows[perm[col]]
        pivot = prow[col]
        if pivot.contains_zero():
            raise StructureError("gauss_solve pivot interval contains zero")
        for r in range(col + 1, n):
            row = rows[perm[r]]
            if row[col].lo == 0.0 and row[col].hi == 0.0:
                continue
            factor = row[col] / pivot
            for j in range(col + 1, n):
                row[j] = row[j] - factor * prow[j]
            rhs[perm[r]] = rhs[perm[r]] - factor * rhs[perm[col]]
            row[col] = Interval.point(0.0)
    x: list[Interval] = [Interval.point(0.0)] * n
    for i in range(n - 1, -1, -1):
        row = rows[perm[i]]
        acc = rhs[perm[i]]
        for j in range(i + 1, n):
            acc = acc - row[j] * x[j]
        x[i] = acc / row[i]
    return IVector.from_intervals(x)


def gauss_solve_mat(a: np.ndarray, b: IMatrix) -> IMatrix:
    """Rigorous enclosure of ``a^-1 B`` for a point matrix ``a`` (columnwise)."""
    cols = [
        gauss_solve(a, IVector(b.lo[:, j], b.hi[:, j])) for j in range(b.shape[1])
    ]
    lo = np.column_stack([c.lo for c in cols])
    hi = np.column_stack([c.hi for c in cols])
    return IMatrix(lo, hi)
