"""Planar circular restricted three-body problem in the rotating frame.

States are ``(x, y, vx, vy)`` in the synodic (co-rotating) frame with the
two primaries fixed on the x-axis: the heavy primary (Sun) at ``(-mu, 0)``
and the light one (Jupiter) at ``(1 - mu, 0)``.  The equations of motion
derive from the effective potential

    Omega(x, y) = (x^2 + y^2)/2 + (1-mu)/r1 + mu/r2 + mu*(1-mu)/2

as ``x'' - 2 y' = Omega_x`` and ``y'' + 2 x' = Omega_y``.  The constant
term keeps the Jacobi integral ``C = 2*Omega - (vx^2 + vy^2)`` on the
convention used by the bundled section data, so energy levels quoted here
are only comparable against that convention.

The reversing symmetry ``R(x, y, vx, vy) = (x, -y, -vx, vy)`` conjugates
the flow to its time reversal: ``phi(t, R s) = R phi(-t, s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SearchError, SingularityError
from .intervals import Interval, IMatrix, IVector

__all__ = [
    "MU_SUN_JUPITER",
    "JACOBI_OTERMA",
    "GUARD_RADIUS",
    "Params",
    "primary_offsets",
    "effective_potential",
    "potential_gradient",
    "potential_hessian",
    "vector_field",
    "vector_field_jacobian",
    "jacobi_constant",
    "reversal",
    "hill_admissible",
    "libration_point",
    "effective_potential_iv",
    "vector_field_iv",
    "vector_field_jacobian_iv",
]

#: Sun-Jupiter mass ratio used throughout the bundled data.
MU_SUN_JUPITER = 0.0009537

#: Jacobi constant of the Oterma-type energy level the bundled data lives on.
JACOBI_OTERMA = 3.03

#: Distances to a primary below this raise :class:`SingularityError`.
GUARD_RADIUS = 1e-12


@dataclass(frozen=True, slots=True)
class Params:
    """Problem parameters: mass ratio and the Jacobi constant of the level set."""

    mu: float = MU_SUN_JUPITER
    jacobi: float = JACOBI_OTERMA

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 0.5:
            raise DomainError(f"mass ratio must lie in (0, 1/2), got {self.mu}")


def primary_offsets(params: Params, x: float, y: float) -> tuple[float, float]:
    """Squared distances (r1^2, r2^2) to the heavy and light primary."""
    dx1 = x + params.mu
    dx2 = x - 1.0 + params.mu
    return dx1 * dx1 + y * y, dx2 * dx2 + y * y


def _radii(params: Params, x: float, y: float) -> tuple[float, float]:
    r1sq, r2sq = primary_offsets(params, x, y)
    if r1sq < GUARD_RADIUS * GUARD_RADIUS or r2sq < GUARD_RADIUS * GUARD_RADIUS:
        raise SingularityError(
            f"state ({x}, {y}) is within {GUARD_RADIUS} of a primary"
        )
    return math.sqrt(r1sq), math.sqrt(r2sq)


def effective_potential(params: Params, x: float, y: float) -> float:
    """Omega(x, y), including the constant mu*(1-mu)/2 term."""
    mu = params.mu
    r1, r2 = _radii(params, x, y)
    return (
        0.5 * (x * x + y * y)
        + (1.0 - mu) / r1
        + mu / r2
        + 0.5 * mu * (1.0 - mu)
    )


def potential_gradient(params: Params, x: float, y: float) -> tuple[float, float]:
    """(Omega_x, Omega_y)."""
    mu = params.mu
    r1, r2 = _radii(params, x, y)
    k1 = (1.0 - mu) / (r1 * r1 * r1)
    k2 = mu / (r2 * r2 * r2)
    ox = x - k1 * (x + mu) - k2 * (x - 1.0 + mu)
    oy = y - k1 * y - k2 * y
    return ox, oy


def potential_hessian(params: Params, x: float, y: float) -> tuple[float, float, float]:
    """(Omega_xx, Omega_xy, Omega_yy)."""
    mu = params.mu
    r1, r2 = _radii(params, x, y)
    d1 = x + mu
    d2 = x - 1.0 + mu
    s1 = (1.0 - mu) / (r1 * r1 * r1)
    s2 = mu / (r2 * r2 * r2)
    w1 = (1.0 - mu) / (r1 * r1 * r1 * r1 * r1)
    w2 = mu / (r2 * r2 * r2 * r2 * r2)
    oxx = 1.0 - (s1 - 3.0 * d1 * d1 * w1) - (s2 - 3.0 * d2 * d2 * w2)
    oxy = 3.0 * y * (d1 * w1 + d2 * w2)
    oyy = 1.0 - (s1 - 3.0 * y * y * w1) - (s2 - 3.0 * y * y * w2)
    return oxx, oxy, oyy


def vector_field(params: Params, state) -> np.ndarray:
    """Right-hand side of the first-order system for (x, y, vx, vy)."""
    x, y, vx, vy = (float(c) for c in state)
    ox, oy = potential_gradient(params, x, y)
    return np.array([vx, vy, 2.0 * vy + ox, -2.0 * vx + oy])


def vector_field_jacobian(params: Params, state) -> np.ndarray:
    """Jacobian of :func:`vector_field` with respect to the state."""
    x, y = float(state[0]), float(state[1])
    oxx, oxy, oyy = potential_hessian(params, x, y)
    return np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [oxx, oxy, 0.0, 2.0],
            [oxy, oyy, -2.0, 0.0],
        ]
    )


def jacobi_constant(params: Params, state) -> float:
    """Jacobi integral C = 2*Omega - (vx^2 + vy^2)."""
    x, y, vx, vy = (float(c) for c in state)
    return 2.0 * effective_potential(params, x, y) - (vx * vx + vy * vy)


def reversal(state) -> np.ndarray:
    """The reversing symmetry R(x, y, vx, vy) = (x, -y, -vx, vy)."""
    x, y, vx, vy = (float(c) for c in state)
    return np.array([x, -y, -vx, vy])


def hill_admissible(params: Params, x: float, y: float) -> bool:
    """True iff (x, y) lies in the Hill region 2*Omega >= C of the level set."""
    return 2.0 * effective_potential(params, x, y) - params.jacobi >= 0.0


def libration_point(params: Params, index: int) -> float:
    """x-coordinate of the collinear equilibrium L1 or L2.

    L1 lies between the primaries, L2 beyond the light one; both are roots
    of Omega_x(x, 0) = 0, found by bisection on a sign-definite bracket and
    polished by Newton steps to ~1e-14.
    """
    mu = params.mu
    if index == 1:
        lo, hi = -mu + 1e-9, 1.0 - mu - 1e-9
    elif index == 2:
        lo, hi = 1.0 - mu + 1e-9, 3.0
    else:
        raise DomainError(f"only the collinear points 1 and 2 are supported, got {index}")

    def f(x: float) -> float:
        return potential_gradient(params, x, 0.0)[0]

    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0.0:
        raise SearchError("libration bracket does not change sign")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-15:
            break
    x = 0.5 * (lo + hi)
    for _ in range(8):
        ox = f(x)
        oxx = potential_hessian(params, x, 0.0)[0]
        step = ox / oxx
        x -= step
        if abs(step) < 1e-15:
            break
    return x


# ----------------------------------------------------------------------
# Interval variants (same formulas over outward-rounded intervals).
# ----------------------------------------------------------------------


def _radii_iv(params: Params, x: Interval, y: Interval) -> tuple[Interval, Interval]:
    r1sq = (x + params.mu).sqr() + y.sqr()
    r2sq = (x - (1.0 - params.mu)).sqr() + y.sqr()
    if r1sq.lo < GUARD_RADIUS * GUARD_RADIUS or r2sq.lo < GUARD_RADIUS * GUARD_RADIUS:
        raise SingularityError("interval state reaches the guard radius of a primary")
    return r1sq.sqrt(), r2sq.sqrt()


def effective_potential_iv(params: Params, x: Interval, y: Interval) -> Interval:
    """Interval enclosure of Omega over a rectangle."""
    mu = params.mu
    r1, r2 = _radii_iv(params, x, y)
    return (
        (x.sqr() + y.sqr()) * 0.5
        + (1.0 - mu) / r1
        + mu / r2
        + 0.5 * mu * (1.0 - mu)
    )


def vector_field_iv(params: Params, box: IVector) -> IVector:
    """Interval enclosure of the right-hand side over a state box."""
    mu = params.mu
    x, y, vx, vy = box.components
    r1, r2 = _radii_iv(params, x, y)
    k1 = (1.0 - mu) / (r1 * r1 * r1)
    k2 = mu / (r2 * r2 * r2)
    ox = x - k1 * (x + mu) - k2 * (x - (1.0 - mu))
    oy = y - (k1 + k2) * y
    return IVector.from_intervals(
        [vx, vy, vy * 2.0 + ox, (-2.0) * vx + oy]
    )


def vector_field_jacobian_iv(params: Params, box: IVector) -> IMatrix:
    """Interval enclosure of the state Jacobian over a state box."""
    mu = params.mu
    x, y = box[0], box[1]
    r1, r2 = _radii_iv(params, x, y)
    d1 = x + mu
    d2 = x - (1.0 - mu)
    s1 = (1.0 - mu) / (r1 * r1 * r1)
    s2 = mu / (r2 * r2 * r2)
    w1 = (1.0 - mu) / (r1 * r1 * r1 * r1 * r1)
    w2 = mu / (r2 * r2 * r2 * r2 * r2)
    one = Interval.point(1.0)
    oxx = one - (s1 - d1.sqr() * w1 * 3.0) - (s2 - d2.sqr() * w2 * 3.0)
    oxy = (d1 * w1 + d2 * w2) * y * 3.0
    oyy = one - (s1 - y.sqr() * w1 * 3.0) - (s2 - y.sqr() * w2 * 3.0)
    zero = Interval.point(0.0)
    rows = [
        [zero, zero, one, zero],
        [zero, zero, zero, one],
        [oxx, oxy, zero, Interval.point(2.0)],
        [oxy, oyy, Interval.point(-2.0), zero],
    ]
    lo = np.array([[e.lo for e in row] for row in rows])
    hi = np.array([[e.hi for e in row] for row in rows])
    return IMatrix(lo, hi)
