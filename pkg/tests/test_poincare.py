"""Section maps: composition, reversibility, derivatives, fixed points."""

import numpy as np
import pytest

from pcr3bp import dynamics, poincare as pc
from pcr3bp.dynamics import JACOBI_OTERMA, MU_SUN_JUPITER, Params
from pcr3bp.errors import DomainError
from pcr3bp.intervals import Interval

P = Params(MU_SUN_JUPITER, JACOBI_OTERMA)
RNG = np.random.default_rng(7)

# exterior-realm departure used as a well-behaved base point
BASE = pc.SectionPoint(-1.12327231155833984, 0.0, 1)


def section_samples(n, seed=11):
    """Random admissible section points on Theta_+ in the outer realm."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        x = rng.uniform(-1.3, -1.0)
        vx = rng.uniform(-0.15, 0.15)
        try:
            pc.section_lift_vy(P, x, vx, 1)
        except DomainError:
            continue
        pts.append(pc.SectionPoint(x, vx, 1))
    return pts


# ----------------------------------------------------------------------
# map tags
# ----------------------------------------------------------------------


def test_tag_signatures():
    assert pc.HALF_PLUS.crossing_signs() == (-1,)
    assert pc.HALF_MINUS.crossing_signs() == (1,)
    assert pc.FULL_PLUS.crossing_signs() == (-1, 1)
    assert pc.FULL_MINUS.crossing_signs() == (1, -1)


def test_tag_inverse_signatures():
    # backward integration retraces crossings in reverse, ending on the
    # domain section
    assert pc.HALF_PLUS.crossing_signs(inverse=True) == (1,)
    assert pc.HALF_MINUS.crossing_signs(inverse=True) == (-1,)
    assert pc.FULL_PLUS.crossing_signs(inverse=True) == (-1, 1)
    assert pc.FULL_MINUS.crossing_signs(inverse=True) == (1, -1)


def test_tag_domains_compose():
    assert pc.HALF_PLUS.image_sign == pc.HALF_MINUS.domain_sign
    assert pc.FULL_PLUS.domain_sign == pc.FULL_PLUS.image_sign
    with pytest.raises(DomainError):
        pc.apply_chain(P, [pc.HALF_PLUS, pc.HALF_PLUS], BASE)


# ----------------------------------------------------------------------
# lift / project
# ----------------------------------------------------------------------


def test_lift_project_roundtrip():
    for pt in section_samples(10):
        state = pc.lift(P, pt)
        assert state[1] == 0.0
        assert dynamics.jacobi_constant(P, state) == pytest.approx(P.jacobi, abs=1e-13)
        back = pc.project(state)
        assert back == pt


def test_lift_rejects_forbidden_points():
    with pytest.raises(DomainError):
        pc.lift(P, pc.SectionPoint(-1.0, 0.0, 1))


def test_lift_tangent_matches_finite_differences():
    pt = BASE
    state = pc.lift(P, pt)
    dt = pc.lift_tangent(P, state)
    eps = 1e-7
    for j, dvec in enumerate([(eps, 0.0), (0.0, eps)]):
        sp = pc.lift(P, pc.SectionPoint(pt.x + dvec[0], pt.vx + dvec[1], 1))
        sm = pc.lift(P, pc.SectionPoint(pt.x - dvec[0], pt.vx - dvec[1], 1))
        fd = (sp - sm) / (2 * eps)
        assert np.max(np.abs(dt[:, j] - fd)) < 1e-7


def test_reflect_is_an_involution_on_the_section():
    pt = section_samples(1, seed=5)[0]
    assert pc.reflect(pc.reflect(pt)) == pt
    state = pc.lift(P, pt)
    r_state = dynamics.reversal(state)
    assert pc.project(r_state) == pc.reflect(pt)


# ----------------------------------------------------------------------
# map application
# ----------------------------------------------------------------------


def test_full_map_is_the_half_map_composition():
    img_full, t_full = pc.apply_map(P, pc.FULL_PLUS, BASE)
    mid, t1 = pc.apply_map(P, pc.HALF_PLUS, BASE)
    img_two, t2 = pc.apply_map(P, pc.HALF_MINUS, mid)
    assert img_full.x == pytest.approx(img_two.x, abs=1e-12)
    assert img_full.vx == pytest.approx(img_two.vx, abs=1e-12)
    assert t_full == pytest.approx(t1 + t2, abs=1e-9)


def test_inverse_map_round_trip():
    for pt in section_samples(5):
        img, t_fwd = pc.apply_map(P, pc.HALF_PLUS, pt)
        back, t_back = pc.apply_map(P, pc.HALF_PLUS, img, inverse=True)
        assert back.x == pytest.approx(pt.x, abs=1e-10)
        assert back.vx == pytest.approx(pt.vx, abs=1e-10)
        assert t_back == pytest.approx(-t_fwd, abs=1e-9)


def test_reversibility_conjugacy():
    # R P_half_plus R = P_half_minus^-1 pointwise on the section
    for pt in section_samples(5, seed=13):
        img, _ = pc.apply_map(P, pc.HALF_PLUS, pt)
        w, _ = pc.apply_map(P, pc.HALF_MINUS, pc.reflect(img))
        assert w.x == pytest.approx(pt.x, abs=1e-8)
        assert w.vx == pytest.approx(-pt.vx, abs=1e-8)


def test_apply_chain_runs_whole_words():
    # P+ as a chain of two half maps in application order
    img_chain, t_chain = pc.apply_chain(P, [pc.HALF_PLUS, pc.HALF_MINUS], BASE)
    img_full, t_full = pc.apply_map(P, pc.FULL_PLUS, BASE)
    assert img_chain.x == pytest.approx(img_full.x, abs=1e-12)
    assert t_chain == pytest.approx(t_full, abs=1e-10)


def test_domain_mismatch_raises():
    theta_minus_pt = pc.SectionPoint(1.05, 0.0, -1)
    with pytest.raises(DomainError):
        pc.apply_map(P, pc.HALF_PLUS, theta_minus_pt)


# ----------------------------------------------------------------------
# derivatives
# ----------------------------------------------------------------------


def test_map_derivative_matches_finite_differences():
    dp, img, _ = pc.map_derivative(P, pc.HALF_PLUS, BASE)
    eps = 1e-7
    fd = np.zeros((2, 2))
    for j, dvec in enumerate([(eps, 0.0), (0.0, eps)]):
        pp = pc.SectionPoint(BASE.x + dvec[0], BASE.vx + dvec[1], 1)
        pm = pc.SectionPoint(BASE.x - dvec[0], BASE.vx - dvec[1], 1)
        ip, _ = pc.apply_map(P, pc.HALF_PLUS, pp)
        im, _ = pc.apply_map(P, pc.HALF_PLUS, pm)
        fd[:, j] = (ip.as_array() - im.as_array()) / (2 * eps)
    assert np.max(np.abs(dp - fd)) < 1e-6 * np.max(np.abs(dp))


def test_chain_rule_across_the_intermediate_section():
    dp_full, _, _ = pc.chain_derivative(P, [pc.FULL_PLUS], BASE)
    dp_1, mid, _ = pc.map_derivative(P, pc.HALF_PLUS, BASE)
    dp_2, _, _ = pc.map_derivative(P, pc.HALF_MINUS, mid)
    assert np.max(np.abs(dp_2 @ dp_1 - dp_full)) < 1e-8 * np.max(np.abs(dp_full))


def test_inverse_derivative_is_the_matrix_inverse():
    dp, img, _ = pc.map_derivative(P, pc.HALF_PLUS, BASE)
    dp_inv, _, _ = pc.map_derivative(P, pc.HALF_PLUS, img, inverse=True)
    assert np.max(np.abs(dp_inv @ dp - np.eye(2))) < 1e-7


# ----------------------------------------------------------------------
# rigorous application
# ----------------------------------------------------------------------


def test_rigorous_image_contains_point_images():
    x_iv = Interval(BASE.x - 5e-9, BASE.x + 5e-9)
    vx_iv = Interval(-2e-7, 2e-7)
    rig = pc.apply_chain_rigorous(P, [pc.HALF_PLUS], x_iv, vx_iv,
                                  want_derivative=True)
    for sx in (-1.0, 0.0, 1.0):
        for sv in (-1.0, 0.0, 1.0):
            pt = pc.SectionPoint(BASE.x + sx * 5e-9, sv * 2e-7, 1)
            img, t = pc.apply_map(P, pc.HALF_PLUS, pt)
            assert rig.x.lo <= img.x <= rig.x.hi
            assert rig.vx.lo <= img.vx <= rig.vx.hi
            assert rig.t.lo <= t <= rig.t.hi
    dp_pt, _, _ = pc.map_derivative(P, pc.HALF_PLUS, BASE)
    for i in range(2):
        for j in range(2):
            assert rig.dp.entry(i, j).lo <= dp_pt[i, j] <= rig.dp.entry(i, j).hi


def test_rigorous_inverse_contains_preimage():
    img, _ = pc.apply_map(P, pc.HALF_PLUS, BASE)
    rig = pc.apply_chain_rigorous(
        P, [pc.HALF_PLUS],
        Interval.point(img.x).inflate(1e-10),
        Interval.point(img.vx).inflate(1e-10),
        inverse=True,
    )
    assert rig.x.lo <= BASE.x <= rig.x.hi
    assert rig.vx.lo <= BASE.vx <= rig.vx.hi


def test_rigorous_composite_word():
    # one flight through P+ then Ph+: three crossings, no re-boxing
    rig = pc.apply_chain_rigorous(
        P, [pc.FULL_PLUS, pc.HALF_PLUS],
        Interval.point(BASE.x).inflate(1e-10),
        Interval.point(BASE.vx).inflate(1e-10),
    )
    mid, _ = pc.apply_map(P, pc.FULL_PLUS, BASE)
    img, _ = pc.apply_map(P, pc.HALF_PLUS, mid)
    assert rig.x.lo <= img.x <= rig.x.hi
    assert rig.vx.lo <= img.vx <= rig.vx.hi
    assert rig.state[3].hi < 0.0  # lands on Theta_-


# ----------------------------------------------------------------------
# Lyapunov fixed points
# ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def orbits():
    return {i: pc.lyapunov_fixed_point(P, i) for i in (1, 2)}


def test_lyapunov_frozen_positions(orbits):
    assert orbits[1].point.x == pytest.approx(0.920803491320747, abs=1e-9)
    assert orbits[2].point.x == pytest.approx(1.081929486841790, abs=1e-9)


def test_lyapunov_fixed_point_quality(orbits):
    for i, full in ((1, pc.FULL_PLUS), (2, pc.FULL_MINUS)):
        orb = orbits[i]
        assert orb.residual < 1e-11
        assert abs(orb.point.vx) < 1e-12  # sits on the symmetry line
        img, t = pc.apply_map(P, full, orb.point)
        assert abs(img.x - orb.point.x) < 1e-11
        assert t == pytest.approx(orb.period, abs=1e-9)


def test_lyapunov_multipliers(orbits):
    for i in (1, 2):
        lam_u, lam_s = orbits[i].multipliers
        assert lam_u > 100.0
        assert abs(lam_u * lam_s - 1.0) < 1e-8


def test_lyapunov_eigenvector_symmetry(orbits):
    # the reversal maps the unstable direction to the stable one
    for i in (1, 2):
        orb = orbits[i]
        r_u = np.array([orb.unstable_dir[0], -orb.unstable_dir[1]])
        cross = abs(r_u[0] * orb.stable_dir[1] - r_u[1] * orb.stable_dir[0])
        assert cross < 1e-7


def test_lyapunov_periods(orbits):
    assert orbits[1].period == pytest.approx(3.082119126392, abs=1e-8)
    assert orbits[2].period == pytest.approx(3.310671457571, abs=1e-8)
