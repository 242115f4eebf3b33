"""Interval arithmetic: exactness, containment, and linear algebra."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcr3bp.intervals import (
    IMatrix,
    Interval,
    IVector,
    gauss_solve,
    gauss_solve_mat,
)

mp.mp.dps = 50


def ulps(iv: Interval) -> float:
    """Width of an interval in units of the last place of its magnitude."""
    scale = max(abs(iv.lo), abs(iv.hi), 1e-300)
    return iv.width / (math.ulp(scale))


# ----------------------------------------------------------------------
# exact cases
# ----------------------------------------------------------------------


def test_add_exact():
    r = Interval(1.0, 2.0) + Interval(3.0, 4.0)
    assert (r.lo, r.hi) == (4.0, 6.0)


def test_sub_exact():
    r = Interval(1.0, 2.0) - Interval(3.0, 4.0)
    assert (r.lo, r.hi) == (-3.0, -1.0)


def test_mul_tight_products():
    # products are opened by one ulp each side (uniform rounding guard)
    r = Interval(-1.0, 2.0) * Interval(3.0, 4.0)
    assert r.lo <= -4.0 <= r.hi and r.lo <= 8.0 <= r.hi
    assert -4.0 - r.lo <= math.ulp(4.0)
    assert r.hi - 8.0 <= math.ulp(8.0)


def test_add_inexact_is_one_ulp():
    # 0.1 + 0.2 is not representable; the exact-residual correction should
    # open the result by a single ulp on the correct side only
    r = Interval.point(0.1) + Interval.point(0.2)
    exact = mp.mpf(0.1) + mp.mpf(0.2)
    assert mp.mpf(r.lo) <= exact <= mp.mpf(r.hi)
    assert ulps(r) <= 1.0


def test_scalar_coercion():
    assert (Interval(1.0, 2.0) + 1.0) == Interval(2.0, 3.0)
    assert (3.0 - Interval(1.0, 2.0)) == Interval(1.0, 2.0)
    r = 2.0 * Interval(1.0, 2.0)
    assert r.lo <= 2.0 and 4.0 <= r.hi
    # at most the one-ulp rounding guard beyond the true endpoints
    assert 2.0 - r.lo <= math.ulp(2.0)
    assert r.hi - 4.0 <= math.ulp(4.0)


def test_div_straddles_exact_third():
    r = Interval.point(1.0) / Interval.point(3.0)
    third = mp.mpf(1) / 3
    assert mp.mpf(r.lo) < third < mp.mpf(r.hi)
    assert ulps(r) <= 2.0


def test_div_by_zero_interval_raises():
    with pytest.raises(ZeroDivisionError):
        Interval.point(1.0) / Interval(-1.0, 1.0)


def test_sqrt_two_tight():
    r = Interval.point(2.0).sqrt()
    assert mp.mpf(r.lo) < mp.sqrt(2) < mp.mpf(r.hi)
    assert ulps(r) <= 2.0


def test_sqrt_negative_raises_and_clamps():
    with pytest.raises(ValueError):
        Interval(-1.0, 4.0).sqrt()
    r = Interval(-1.0, 4.0).sqrt(clamp_negative=True)
    assert r.lo == 0.0 and r.hi >= 2.0


def test_sqr_through_zero():
    r = Interval(-1.0, 2.0).sqr()
    assert r.lo == 0.0
    assert 4.0 <= r.hi <= math.nextafter(4.0, math.inf)


def test_pow_int():
    iv = Interval(-0.5, -0.5)
    cubed = iv.pow_int(3)
    assert cubed.lo <= -0.125 <= cubed.hi
    # consistency with repeated multiplication
    five = Interval(0.9, 1.1)
    direct = five.pow_int(5)
    manual = five * five * five * five * five
    assert direct.lo <= manual.hi and manual.lo <= direct.hi
    assert direct.is_subset(manual.inflate(1e-15))


def test_hull_intersection_subset():
    a = Interval(0.0, 1.0)
    b = Interval(0.5, 2.0)
    assert a.hull(b) == Interval(0.0, 2.0)
    assert a.intersection(b) == Interval(0.5, 1.0)
    assert Interval(0.25, 0.75).is_subset(a)
    assert Interval(0.25, 0.75).is_interior_subset(a)
    assert not a.is_interior_subset(a)
    with pytest.raises(ValueError):
        Interval(0.0, 0.1).intersection(Interval(0.2, 0.3))


def test_split_covers_exactly():
    parts = Interval(0.0, 1.0).split(4)
    assert len(parts) == 4
    assert parts[0].lo == 0.0 and parts[-1].hi == 1.0
    for a, b in zip(parts, parts[1:]):
        assert a.hi == b.lo


def test_point_queries():
    iv = Interval(-2.0, 6.0)
    assert iv.mid == 2.0
    assert iv.width == 8.0
    assert iv.mag == 6.0
    assert iv.mig == 0.0
    assert Interval(3.0, 6.0).mig == 3.0


# ----------------------------------------------------------------------
# property-based containment
# ----------------------------------------------------------------------

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def _make(a: float, b: float) -> Interval:
    return Interval(min(a, b), max(a, b))


def _inside(x: Interval, s: float) -> float:
    # parameterize a point of x; clamp because the float blend can land
    # one rounding step outside a very lopsided interval
    return min(max(x.lo + s * (x.hi - x.lo), x.lo), x.hi)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite, st.floats(0, 1), st.floats(0, 1))
def test_mul_contains_samples(a, b, c, d, s, t):
    x = _make(a, b)
    y = _make(c, d)
    px = _inside(x, s)
    py = _inside(y, t)
    r = x * y
    assert r.lo <= px * py <= r.hi


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite, st.floats(0, 1), st.floats(0, 1))
def test_add_sub_contain_samples(a, b, c, d, s, t):
    x = _make(a, b)
    y = _make(c, d)
    px = _inside(x, s)
    py = _inside(y, t)
    r = x + y
    assert r.lo <= px + py <= r.hi
    r = x - y
    assert r.lo <= px - py <= r.hi


@settings(max_examples=100, deadline=None)
@given(finite, finite, finite, finite)
def test_inclusion_monotone(a, b, c, d):
    outer = _make(a, b)
    inner = Interval(
        outer.lo + 0.25 * (outer.hi - outer.lo),
        outer.lo + 0.75 * (outer.hi - outer.lo),
    )
    y = _make(c, d)
    assert (inner * y).is_subset(outer * y)
    assert (inner + y).is_subset(outer + y)


# ----------------------------------------------------------------------
# vector / matrix layer
# ----------------------------------------------------------------------


def test_ivector_roundtrip():
    v = IVector.from_point(np.array([1.0, -2.0, 3.0, 0.5]))
    assert np.all(v.lo == v.hi)
    w = v.inflate(1e-3)
    assert np.all(w.lo < v.lo) and np.all(w.hi > v.hi)
    assert v.is_subset(w)
    assert not w.is_subset(v)


def test_matvec_contains_float_product():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.normal(size=(4, 4))
        x = rng.normal(size=4)
        prod = IMatrix.from_point(a) @ IVector.from_point(x)
        exact = [sum(mp.mpf(a[i, j]) * mp.mpf(x[j]) for j in range(4)) for i in range(4)]
        for i in range(4):
            assert mp.mpf(prod.lo[i]) <= exact[i] <= mp.mpf(prod.hi[i])


def test_matmul_contains_sampled_products():
    rng = np.random.default_rng(8)
    alo = rng.normal(size=(3, 3))
    a = IMatrix(alo, alo + 0.01)
    blo = rng.normal(size=(3, 3))
    b = IMatrix(blo, blo + 0.01)
    prod = a @ b
    for _ in range(20):
        sa = alo + 0.01 * rng.random(size=(3, 3))
        sb = blo + 0.01 * rng.random(size=(3, 3))
        point = sa @ sb
        # float rounding in the sample product is far below the 0.01 widths
        assert np.all(prod.lo <= point + 1e-12)
        assert np.all(point - 1e-12 <= prod.hi)


def test_gauss_solve_contains_true_solution():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
        x_true = rng.normal(size=4)
        b = IVector.from_point(a @ x_true)
        sol = gauss_solve(a, b)
        hp = mp.lu_solve(mp.matrix(a.tolist()), mp.matrix((a @ x_true).tolist()))
        for i in range(4):
            assert mp.mpf(sol.lo[i]) <= hp[i] <= mp.mpf(sol.hi[i])


def test_gauss_solve_mat_matches_columns():
    rng = np.random.default_rng(10)
    a = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
    cols = rng.normal(size=(4, 4))
    b = IMatrix.from_point(cols)
    sol = gauss_solve_mat(a, b)
    for j in range(4):
        col = gauss_solve(a, IVector.from_point(cols[:, j]))
        for i in range(4):
            assert sol.entry(i, j).lo <= col[i].lo
            assert col[i].hi <= sol.entry(i, j).hi


def test_gauss_singular_raises():
    a = np.zeros((4, 4))
    with pytest.raises(ValueError):
        gauss_solve(a, IVector.from_point(np.ones(4)))
