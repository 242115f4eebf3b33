"""Taylor coefficient kernels: recurrences, variational series, enclosures."""

import mpmath as mp
import numpy as np
import pytest

from pcr3bp import dynamics, taylor
from pcr3bp.dynamics import JACOBI_OTERMA, MU_SUN_JUPITER, Params

P = Params(MU_SUN_JUPITER, JACOBI_OTERMA)
RNG = np.random.default_rng(1123)

STATE = np.array([-1.12327231155833984, 0.0, 0.0, 0.11797393804215285])
ORDER = 20


def random_states(n):
    out = []
    while len(out) < n:
        s = RNG.uniform([-1.4, -1.4, -0.6, -0.6], [1.4, 1.4, 0.6, 0.6])
        r1 = np.hypot(s[0] + P.mu, s[1])
        r2 = np.hypot(s[0] - 1 + P.mu, s[1])
        if r1 > 0.2 and r2 > 0.05:
            out.append(s)
    return out


def test_first_coefficient_is_the_vector_field():
    for s in random_states(10):
        c = taylor.point_coeffs(s, P.mu, 6)
        f = dynamics.vector_field(P, s)
        assert np.allclose(c[1], f, rtol=1e-14, atol=1e-14)
        assert np.array_equal(c[0], s)


def test_series_satisfies_the_equation_termwise():
    # (k+1) c_{k+1} must be the k-th Taylor coefficient of f(x(t)); check
    # via differentiated Horner evaluation against the field along the arc
    c = taylor.point_coeffs(STATE, P.mu, ORDER)
    dc = (c[1:].T * np.arange(1, ORDER + 1)).T  # series of d/dt x(t)
    for tau in (0.0, 0.05, -0.07, 0.11):
        x_t = taylor.horner_point(c, tau)
        dx_t = taylor.horner_point(np.vstack([dc, np.zeros(4)]), tau)
        f = dynamics.vector_field(P, x_t)
        assert np.max(np.abs(dx_t - f)) < 1e-12


def test_series_matches_independent_integrator():
    # mpmath's odefun is an unrelated Taylor implementation at 30 digits
    mp.mp.dps = 30
    mu = mp.mpf('0.0009537')

    def field(t, s):
        x, y, vx, vy = s
        r1 = mp.sqrt((x + mu) ** 2 + y**2)
        r2 = mp.sqrt((x - 1 + mu) ** 2 + y**2)
        ox = x - (1 - mu) * (x + mu) / r1**3 - mu * (x - 1 + mu) / r2**3
        oy = y - (1 - mu) * y / r1**3 - mu * y / r2**3
        return [vx, vy, 2 * vy + ox, -2 * vx + oy]

    ref = mp.odefun(field, 0, [mp.mpf(float(v)) for v in STATE], tol=mp.mpf('1e-25'))
    c = taylor.point_coeffs(STATE, P.mu, 28)
    for tau in (0.02, 0.05, 0.08):
        ours = taylor.horner_point(c, tau)
        theirs = ref(tau)
        err = max(abs(mp.mpf(float(o)) - t) for o, t in zip(ours, theirs))
        assert err < 1e-14


def test_jacobi_constant_along_series():
    c = taylor.point_coeffs(STATE, P.mu, ORDER)
    c0 = dynamics.jacobi_constant(P, STATE)
    for tau in np.linspace(-0.1, 0.1, 11):
        drift = dynamics.jacobi_constant(P, taylor.horner_point(c, tau)) - c0
        assert abs(drift) < 1e-13


def test_variational_series_matches_finite_differences():
    c, vc = taylor.point_var_coeffs(STATE, np.eye(4), P.mu, ORDER)
    tau = 0.05
    v = taylor.horner_var_point(vc, tau)
    eps = 1e-6
    for j in range(4):
        dv = np.zeros(4)
        dv[j] = eps
        cp = taylor.point_coeffs(STATE + dv, P.mu, ORDER)
        cm = taylor.point_coeffs(STATE - dv, P.mu, ORDER)
        fd = (taylor.horner_point(cp, tau) - taylor.horner_point(cm, tau)) / (2 * eps)
        assert np.max(np.abs(v[:, j] - fd)) < 1e-8


def test_variational_series_seeding():
    # seeding with V0 must equal (series with identity) @ V0
    v0 = RNG.normal(size=(4, 4))
    _, vc_seeded = taylor.point_var_coeffs(STATE, v0, P.mu, 12)
    _, vc_eye = taylor.point_var_coeffs(STATE, np.eye(4), P.mu, 12)
    tau = 0.04
    a = taylor.horner_var_point(vc_seeded, tau)
    b = taylor.horner_var_point(vc_eye, tau) @ v0
    assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(b)))


def test_interval_coeffs_contain_point_coeffs():
    for s in random_states(6):
        c = taylor.point_coeffs(s, P.mu, 10)
        box = np.array([s - 1e-6, s + 1e-6])
        clo, chi = taylor.iv_coeffs(box[0], box[1], P.mu, 10)
        for _ in range(10):
            sample = RNG.uniform(box[0], box[1])
            cs = taylor.point_coeffs(sample, P.mu, 10)
            assert np.all(clo <= cs + 1e-300) and np.all(cs <= chi + 1e-300)
        assert np.all(clo <= c) and np.all(c <= chi)


def test_interval_thin_coeffs_are_tight():
    # rounding slack compounds through the order-k convolutions; measured
    # against each order's dominant coefficient it stays below ~1e-10
    clo, chi = taylor.iv_coeffs(STATE, STATE, P.mu, ORDER)
    c = taylor.point_coeffs(STATE, P.mu, ORDER)
    width = chi - clo
    row_scale = np.maximum(np.max(np.abs(c), axis=1), 1e-300)
    assert np.max(width / row_scale[:, None]) < 1e-9
    assert np.all(clo <= c) and np.all(c <= chi)


def test_interval_horner_contains_point_horner():
    clo, chi = taylor.iv_coeffs(STATE - 1e-8, STATE + 1e-8, P.mu, ORDER)
    c = taylor.point_coeffs(STATE, P.mu, ORDER)
    for tlo, thi in [(0.0, 0.05), (-0.05, 0.0), (0.02, 0.03)]:
        lo, hi = taylor.horner_iv(clo, chi, tlo, thi)
        for tau in np.linspace(tlo, thi, 7):
            pt = taylor.horner_point(c, tau)
            assert np.all(lo <= pt) and np.all(pt <= hi)


def test_interval_variational_contains_point_variational():
    vlo_seed = np.eye(4)
    clo, chi, vlo, vhi = taylor.iv_var_coeffs(
        STATE - 1e-8, STATE + 1e-8, vlo_seed, vlo_seed, P.mu, 12
    )
    _, vc = taylor.point_var_coeffs(STATE, np.eye(4), P.mu, 12)
    assert np.all(vlo <= vc + 1e-300) and np.all(vc <= vhi + 1e-300)
    glo, ghi = taylor.horner_var_iv(vlo, vhi, 0.0, 0.04)
    for tau in np.linspace(0.0, 0.04, 5):
        v = taylor.horner_var_point(vc, tau)
        assert np.all(glo <= v) and np.all(v <= ghi)


def test_close_encounter_guard():
    at_primary = np.array([1.0 - P.mu, 0.0, 0.1, 0.1])
    with pytest.raises(ValueError):
        taylor.point_coeffs(at_primary, P.mu, 8)
