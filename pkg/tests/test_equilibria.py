"""Equilibrium builders, rotation rates, and branch solvers."""

import math

import numpy as np
import pytest

from vortex_atlas.core import (
    Configuration,
    Family,
    FamilyDescriptor,
    InvalidDescriptor,
    Layout,
    UnitVector3,
    Vortex,
    VortexError,
)
from vortex_atlas.dynamics import hamiltonian, momentum_map, vector_field
from vortex_atlas.equilibria import (
    NoRoot,
    NotTwoRings,
    OutOfDomain,
    TwoRingPhase,
    angular_velocity_generic,
    branch_c2v_2R2p,
    branch_c2v_RRp2p,
    branch_c2v_RmRmp,
    branch_c2v_RmRmp_all,
    configuration_angular_velocity,
    make_equatorial_pm_ring,
    make_family,
    make_plus_ring_pole_pair,
    make_single_plus_ring,
    make_tetrahedral_pair,
    re_residual,
    ring_angular_velocity,
    two_ring_phase_test,
)

# positive root of a^4 + a^2 = 1: the meridian branch crosses the
# anti-diagonal at (a, -a) and (-a, a)
SQUARE_ROOT_HEIGHT = 0.7861513777574233


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def test_alternating_equatorial_ring_geometry():
    c = make_equatorial_pm_ring(3)
    assert len(c) == 6
    assert np.max(np.abs(c.positions()[:, 2])) == 0.0
    assert sorted(c.strengths()) == [-1.0] * 3 + [1.0] * 3
    # strengths alternate along the ring
    assert list(c.strengths()[:4]) == [1.0, -1.0, 1.0, -1.0]
    with pytest.raises(InvalidDescriptor):
        make_equatorial_pm_ring(1)


def test_tetrahedral_pair_is_a_fixed_equilibrium():
    c = make_tetrahedral_pair()
    assert len(c) == 8
    assert np.max(np.abs(vector_field(c))) < 1e-12
    np.testing.assert_allclose(momentum_map(c), np.zeros(3), atol=1e-15)


def test_two_ring_builder_places_rings_and_poles():
    desc = FamilyDescriptor(Family.DND_RRP, 4, theta0=0.8, k_p=2, lambda_n=-1.0)
    c = make_family(desc)
    p = c.positions()
    u = math.cos(0.8)
    np.testing.assert_allclose(p[:4, 2], u, atol=1e-15)
    np.testing.assert_allclose(p[4:8, 2], -u, atol=1e-15)
    np.testing.assert_allclose(p[8], [0, 0, 1], atol=0)
    np.testing.assert_allclose(p[9], [0, 0, -1], atol=0)
    assert c.strengths()[8] == -1.0 and c.strengths()[9] == 1.0


def test_make_family_rejects_branch_parametrized_families():
    with pytest.raises(InvalidDescriptor):
        make_family(FamilyDescriptor(Family.C2V_2R2P, 2, theta0=0.5))


# ---------------------------------------------------------------------------
# rotation rates
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family", [Family.DNH_2R, Family.DND_RRP])
@pytest.mark.parametrize("n,k_p", [(2, 0), (5, 0), (3, 2)])
def test_ring_rate_matches_generic_formula(family, n, k_p):
    desc = FamilyDescriptor(family, n, theta0=0.8, k_p=k_p)
    xi = ring_angular_velocity(desc)
    c = make_family(desc)
    for index in range(2 * n):
        assert angular_velocity_generic(c, index) == pytest.approx(
            xi, abs=1e-10
        )


def test_single_ring_rate_closed_form():
    for n in (3, 4, 5):
        c = make_single_plus_ring(n, 1.0)
        expected = math.cos(1.0) * (n - 1) / math.sin(1.0) ** 2
        assert angular_velocity_generic(c, 0) == pytest.approx(expected, abs=1e-12)
        assert configuration_angular_velocity(c) == pytest.approx(
            expected, abs=1e-10
        )


def test_plus_ring_with_polar_counter_vortices():
    theta0 = 1.2
    c = make_plus_ring_pole_pair(theta0)
    u = math.cos(theta0)
    xi = configuration_angular_velocity(c)
    assert xi == pytest.approx(-u / math.sin(theta0) ** 2, abs=1e-12)
    assert xi == pytest.approx(-0.41712796729414825, abs=1e-12)
    assert hamiltonian(c) == pytest.approx(-math.log(1.0 - u * u), abs=1e-12)
    np.testing.assert_allclose(momentum_map(c), [0.0, 0.0, 2.0 * u], atol=1e-14)
    with pytest.raises(OutOfDomain):
        make_plus_ring_pole_pair(0.0)


def test_rate_requires_a_relative_equilibrium(pm_sampler):
    rng = np.random.default_rng(5)
    c = pm_sampler(rng, 2, min_chord=0.4)
    with pytest.raises(VortexError):
        configuration_angular_velocity(c)


def test_re_residual_distinguishes_rates():
    desc = FamilyDescriptor(Family.DNH_2R, 3, theta0=0.7)
    c = make_family(desc)
    xi = float(ring_angular_velocity(desc))
    assert re_residual(c, xi) < 1e-10
    assert re_residual(c, xi + 0.5) > 1e-2


# ---------------------------------------------------------------------------
# branch solvers
# ---------------------------------------------------------------------------


def test_two_rings_of_two_with_poles_rational_branch():
    for lam in (1.0, -1.0):
        for x in np.linspace(-0.9, 0.9, 13):
            bp = branch_c2v_2R2p(float(x), lam)
            expected_y = (2.0 * lam * x + 1.0) / (x + 2.0 * lam)
            assert bp.y == pytest.approx(expected_y, abs=1e-12)
            c = bp.configuration()
            assert re_residual(c, configuration_angular_velocity(c)) < 1e-8


def _crossed_rings_relation(x: float, y: float, lam: float) -> float:
    return (
        x * x * y * y
        - 2.0 * y * y
        - 2.0 * x * x
        + 2.0 * x * y
        + 1.0
        - 2.0 * lam * (1.0 - x * y) * (x - y)
    )


def test_crossed_rings_branch_satisfies_its_quartic():
    cases = [(1.0, -1), (-1.0, 1), (0.0, -1)]
    for lam, sign in cases:
        solved = 0
        for x in np.linspace(-0.85, 0.85, 18):
            try:
                bp = branch_c2v_RRp2p(float(x), lam, sign)
            except (OutOfDomain, NoRoot):
                continue
            solved += 1
            assert abs(_crossed_rings_relation(bp.x, bp.y, lam)) < 1e-10
            assert bp.alpha == pytest.approx(math.pi / 2)
        assert solved >= 8, f"too few branch points solved for lambda_n={lam}"


def test_crossed_rings_branch_rejects_out_of_range_roots():
    # the other sign choice at x = 0 lands outside the unit interval
    with pytest.raises(OutOfDomain):
        branch_c2v_RRp2p(0.0, 1.0, +1)
    bp = branch_c2v_RRp2p(0.0, 1.0, -1)
    assert bp.y == pytest.approx((1.0 - math.sqrt(3.0)) / 2.0, abs=1e-12)


def test_crossed_rings_branch_geometry():
    bp = branch_c2v_RRp2p(0.2, 1.0, -1)
    c = bp.configuration()
    p = c.positions()
    # + ring spans longitudes 0 and pi, - ring is turned a quarter turn
    np.testing.assert_allclose(p[0][1], 0.0, atol=1e-15)
    np.testing.assert_allclose(p[2][0], 0.0, atol=1e-12)
    assert c.pole_count == 2


def test_meridian_branch_roots_are_frozen():
    a = SQUARE_ROOT_HEIGHT
    assert a**4 + a**2 - 1.0 == pytest.approx(0.0, abs=1e-15)

    points = branch_c2v_RmRmp_all(-a)
    ys = [bp.y for bp in points]
    assert ys == pytest.approx([-0.6232358358342481, a], abs=1e-9)

    (across,) = branch_c2v_RmRmp_all(-0.5)
    assert across.y == pytest.approx(0.9533410869496951, abs=1e-9)

    assert branch_c2v_RmRmp_all(0.0) == ()
    with pytest.raises(NoRoot):
        branch_c2v_RmRmp(0.0)
    with pytest.raises(OutOfDomain):
        branch_c2v_RmRmp(0.75)
    with pytest.raises(OutOfDomain):
        branch_c2v_RmRmp_all(1.0)


def test_meridian_branch_configurations():
    bp = branch_c2v_RmRmp(-0.5)
    c = bp.configuration()
    p = c.positions()
    # all four vortices in one vertical plane
    np.testing.assert_allclose(p[:, 1], 0.0, atol=1e-15)
    # + heights are (x, -y), - heights are (y, -x)
    np.testing.assert_allclose(
        p[list(c.layout.plus), 2], [bp.x, -bp.y], atol=1e-12
    )
    np.testing.assert_allclose(
        p[list(c.layout.minus), 2], [bp.y, -bp.x], atol=1e-12
    )
    assert re_residual(c, configuration_angular_velocity(c)) < 1e-8


# ---------------------------------------------------------------------------
# ring phase classification
# ---------------------------------------------------------------------------


def test_two_ring_phase_of_constructed_families():
    aligned = make_family(FamilyDescriptor(Family.DNH_2R, 4, theta0=0.7))
    assert two_ring_phase_test(aligned) is TwoRingPhase.IN_PHASE
    staggered = make_family(FamilyDescriptor(Family.DND_RRP, 4, theta0=0.7, k_p=2))
    assert two_ring_phase_test(staggered) is TwoRingPhase.OUT_OF_PHASE_BY_PI_OVER_N


def test_two_ring_phase_neither_for_intermediate_offset():
    offset = 0.3
    vortices = [
        Vortex(UnitVector3.from_spherical(0.7, 0.0), 1.0),
        Vortex(UnitVector3.from_spherical(0.7, math.pi), 1.0),
        Vortex(UnitVector3.from_spherical(2.2, offset), -1.0),
        Vortex(UnitVector3.from_spherical(2.2, math.pi + offset), -1.0),
    ]
    c = Configuration(tuple(vortices), 0, Layout.standard(2, 2, 0))
    assert two_ring_phase_test(c) is TwoRingPhase.NEITHER


def test_two_ring_phase_rejects_non_ring_configurations():
    with pytest.raises(NotTwoRings):
        two_ring_phase_test(make_single_plus_ring(3, 0.8))
    with pytest.raises(NotTwoRings):
        two_ring_phase_test(make_tetrahedral_pair())
