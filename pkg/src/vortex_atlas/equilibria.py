"""Relative equilibria of point vortices with opposite strengths.

Constructors for the symmetric families
----------------------------------------
All families pair ``N`` vortices of strength +1 with ``N`` of strength -1
(plus an optional pinned pole pair):

* the equatorial alternating ring: ``2N`` vortices interleaved around the
  equator — a genuine fixed equilibrium;
* the tetrahedral pair: +1 at the even-sign vertices of a cube's inscribed
  tetrahedron, -1 at their antipodes — also fixed;
* aligned two-ring families (``D_Nh(2R)``): a +ring at co-latitude
  ``theta0`` and a -ring at ``pi - theta0`` with the same longitudes;
* staggered two-ring families (``D_Nd(R,R')``): as above with the -ring
  rotated by ``pi/N``;
* either of the above with a pole pair (``k_p = 2``), strengths
  ``lambda_n`` / ``-lambda_n``.

These rotate rigidly about the z-axis; the rotation rate has a closed
form, and a per-vortex formula provides an independent cross-check for
any configuration that is a relative equilibrium.

Low-symmetry branches
---------------------
Three families with only a single vertical mirror plane (times a half-turn)
branch off the symmetric ones; they are parametrized by the cosines
``x = cos(theta_+)``, ``y = cos(theta_-)`` and the longitude offset
``alpha`` between the two rings of two:

* ``C_2v(2R,2p)``: both rings aligned (``alpha = 0``) with a pole pair;
  ``y`` is a Moebius function of ``x``;
* ``C_2v(R,R',2p)``: rings at right angles (``alpha = pi/2``) with a pole
  pair; ``y`` solves a quadratic (branch sign selectable) derived from a
  quartic relation;
* ``C_2v(R_m,R_m')``: four vortices in a single meridian plane, no poles;
  ``y`` is found by root bracketing.

A phase test distinguishes aligned from staggered two-ring configurations,
and a residual certificate bounds how far a configuration is from being a
relative equilibrium at a given rotation rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .core import (
    Configuration,
    Family,
    FamilyDescriptor,
    InvalidDescriptor,
    Layout,
    PoleSingularity,
    POLE_EPS,
    UnitVector3,
    Vortex,
    VortexError,
)
from .dynamics import MixedChart

__all__ = [
    "OutOfDomain",
    "NoRoot",
    "NotTwoRings",
    "TwoRingPhase",
    "BranchPoint",
    "make_equatorial_pm_ring",
    "make_tetrahedral_pair",
    "make_single_plus_ring",
    "make_plus_ring_pole_pair",
    "make_family",
    "angular_velocity_generic",
    "configuration_angular_velocity",
    "ring_angular_velocity",
    "re_residual",
    "branch_c2v_2R2p",
    "branch_c2v_RRp2p",
    "branch_c2v_RmRmp",
    "two_ring_phase_test",
]


class OutOfDomain(VortexError, ValueError):
    """A branch solver was asked for a parameter outside its domain."""


class NoRoot(VortexError, ArithmeticError):
    """The branch equation has no root in the admissible interval."""


class NotTwoRings(VortexError, ValueError):
    """The configuration's ring vortices do not form two regular rings."""


class TwoRingPhase(Enum):
    """Relative longitude offset between the + and - rings."""

    IN_PHASE = "InPhase"
    OUT_OF_PHASE_BY_PI_OVER_N = "OutPhaseByPiOverN"
    NEITHER = "Neither"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def make_equatorial_pm_ring(n_pairs: int) -> Configuration:
    """Alternating ring of ``2 n_pairs`` vortices on the equator.

    Vortex ``k`` sits at longitude ``pi k / n_pairs`` with strength
    ``(-1)^k``.  This is a fixed equilibrium for every ``n_pairs >= 2``.
    """
    n = int(n_pairs)
    if n < 2:
        raise InvalidDescriptor("the alternating equatorial ring needs n_pairs >= 2")
    vortices = []
    for k in range(2 * n):
        phi = math.pi * k / n
        vortices.append(
            Vortex(UnitVector3(math.cos(phi), math.sin(phi), 0.0), float((-1) ** k))
        )
    layout = Layout(
        plus=tuple(range(0, 2 * n, 2)), minus=tuple(range(1, 2 * n, 2))
    )
    return Configuration(tuple(vortices), 0, layout)


def make_tetrahedral_pair() -> Configuration:
    """Dual tetrahedra: +1 on the even-sign vertices, -1 on their antipodes."""
    r = 1.0 / math.sqrt(3.0)
    even = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    vortices = [
        Vortex(UnitVector3(r * a, r * b, r * c), 1.0) for a, b, c in even
    ] + [
        Vortex(UnitVector3(-r * a, -r * b, -r * c), -1.0) for a, b, c in even
    ]
    return Configuration(tuple(vortices), 0, Layout.standard(4, 4, 0))


def make_single_plus_ring(n: int, theta0: float) -> Configuration:
    """A single ring of ``n`` identical +1 vortices at co-latitude ``theta0``.

    Provided as a reference configuration: its rotation rate has the simple
    closed form ``cos(theta0) (n - 1) / sin(theta0)^2``, which anchors the
    per-vortex rate formula in tests.
    """
    n = int(n)
    if n < 2:
        raise InvalidDescriptor("a ring needs at least two vortices")
    vortices = tuple(
        Vortex(UnitVector3.from_spherical(theta0, 2.0 * math.pi * j / n), 1.0)
        for j in range(n)
    )
    return Configuration(vortices, 0, Layout(plus=tuple(range(n)), minus=()))


def make_plus_ring_pole_pair(theta0: float) -> Configuration:
    """Two +1 vortices at co-latitude ``theta0`` with two -1 pole vortices.

    The ring sits at longitudes 0 and pi.  Note both pole strengths are -1:
    this family balances the +ring against equal polar counter-vortices and
    is the one deliberate exception to the opposite-pole-strength rule.
    """
    if not (0.0 < theta0 < math.pi):
        raise OutOfDomain("theta0 must lie in (0, pi)")
    vortices = (
        Vortex(UnitVector3.from_spherical(theta0, 0.0), 1.0),
        Vortex(UnitVector3.from_spherical(theta0, math.pi), 1.0),
        Vortex(UnitVector3(0.0, 0.0, 1.0), -1.0),
        Vortex(UnitVector3(0.0, 0.0, -1.0), -1.0),
    )
    layout = Layout(plus=(0, 1), minus=(), north=2, south=3)
    return Configuration(vortices, 2, layout)


def make_family(desc: FamilyDescriptor) -> Configuration:
    """Build the configuration described by ``desc``.

    The low-symmetry ``C2v_*`` families are parametrized by branch points,
    not descriptors; use the ``branch_*`` solvers for those.
    """
    desc.validate()
    if desc.family is Family.EQUATORIAL_PM_RING:
        return make_equatorial_pm_ring(desc.n_per_ring)
    if desc.family is Family.TETRAHEDRAL_PAIR:
        return make_tetrahedral_pair()
    if desc.family in (Family.DNH_2R, Family.DND_RRP):
        return _make_two_rings(desc)
    raise InvalidDescriptor(
        f"{desc.family.value} configurations are built from branch points; "
        "use the branch_c2v_* solvers"
    )


def _make_two_rings(desc: FamilyDescriptor) -> Configuration:
    n = desc.n_per_ring
    offset = 0.0 if desc.family is Family.DNH_2R else math.pi / n
    vortices = [
        Vortex(
            UnitVector3.from_spherical(desc.theta0, 2.0 * math.pi * j / n), 1.0
        )
        for j in range(n)
    ]
    vortices += [
        Vortex(
            UnitVector3.from_spherical(
                math.pi - desc.theta0, 2.0 * math.pi * j / n + offset
            ),
            -1.0,
        )
        for j in range(n)
    ]
    if desc.k_p == 2:
        vortices.append(Vortex(UnitVector3(0.0, 0.0, 1.0), desc.lambda_n))
        vortices.append(Vortex(UnitVector3(0.0, 0.0, -1.0), -desc.lambda_n))
    return Configuration(
        tuple(vortices), desc.k_p, Layout.standard(n, n, desc.k_p)
    )


# ---------------------------------------------------------------------------
# Rotation rates and residuals
# ---------------------------------------------------------------------------


def angular_velocity_generic(c: Configuration, index: int = 0) -> float:
    """Rotation rate about z read off one vortex of a relative equilibrium.

    For a configuration rotating rigidly about the z-axis every vortex's
    longitude advances at the same rate

        xi = sum_{j != i} lambda_j (rho_i^2 z_j - z_i (x_i x_j + y_i y_j))
                           / (rho_i^2 (1 - x_i . x_j)),

    with ``rho_i^2 = 1 - z_i^2``.  The formula is meaningless on a pole
    vortex (``rho_i = 0``), so ``index`` must name a ring vortex.
    """
    p = c.positions()
    lam = c.strengths()
    i = int(index)
    if c.pole_count == 2 and i in (c.layout.north, c.layout.south):
        raise PoleSingularity("the per-vortex rate is undefined on a pole vortex")
    rho2 = 1.0 - p[i, 2] ** 2
    if rho2 < POLE_EPS**2:
        raise PoleSingularity("vortex sits too close to a pole for the rate formula")
    total = 0.0
    for j in range(len(c)):
        if j == i:
            continue
        dot = float(p[i] @ p[j])
        horizontal = p[i, 0] * p[j, 0] + p[i, 1] * p[j, 1]
        total += lam[j] * (rho2 * p[j, 2] - p[i, 2] * horizontal) / (
            rho2 * (1.0 - dot)
        )
    return total


def configuration_angular_velocity(c: Configuration, tol: float = 1e-9) -> float:
    """Rotation rate cross-checked over every ring vortex.

    Raises
    ------
    VortexError
        If per-vortex rates disagree by more than ``tol`` — the
        configuration does not rotate rigidly about z.
    """
    ring = tuple(c.layout.plus) + tuple(c.layout.minus)
    if not ring:
        raise PoleSingularity("a pole-only configuration has no ring rate")
    rates = [angular_velocity_generic(c, i) for i in ring]
    spread = max(rates) - min(rates)
    if spread > tol:
        raise VortexError(
            f"per-vortex rotation rates disagree by {spread:.3e}; the "
            "configuration does not rotate rigidly about z"
        )
    return rates[0]


def ring_angular_velocity(desc: FamilyDescriptor) -> float:
    """Closed-form rotation rate of the two-ring families.

    With ``u = cos(theta0)``, ``s = sin(theta0)`` and relative longitudes
    ``delta_j`` of the -ring seen from a +vortex,

        xi = u [ (N - 1)/s^2
                 + sum_j (1 + cos delta_j) / (2 - s^2 (1 + cos delta_j)) ]
             + k_p lambda_n / s^2.
    """
    desc.validate()
    if desc.family not in (Family.DNH_2R, Family.DND_RRP):
        raise InvalidDescriptor(
            "the closed-form rate applies to the two-ring families only"
        )
    n = desc.n_per_ring
    u = math.cos(desc.theta0)
    s2 = 1.0 - u * u
    offset = 0.0 if desc.family is Family.DNH_2R else math.pi / n
    total = u * (n - 1) / s2
    for j in range(n):
        cd = 1.0 + math.cos(2.0 * math.pi * j / n + offset)
        total += u * cd / (2.0 - s2 * cd)
    total += desc.k_p * desc.lambda_n / s2
    return total


def re_residual(c: Configuration, xi_z: float) -> float:
    """Max-norm chart gradient of the augmented Hamiltonian at ``c``.

    A value below 1e-8 certifies that ``c`` is (numerically) a relative
    equilibrium rotating at rate ``xi_z`` about the z-axis.
    """
    chart = MixedChart(c)
    return float(np.max(np.abs(chart.gradient(chart.coords(), xi_z))))


# ---------------------------------------------------------------------------
# Branch solvers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchPoint:
    """One point on a low-symmetry branch.

    ``x = cos(theta_+)`` and ``y = cos(theta_-)`` are the ring co-latitude
    cosines, ``alpha`` the longitude offset between the two rings of two,
    and ``lambda_n`` the north pole strength (0 means no poles).
    """

    x: float
    y: float
    alpha: float
    family: Family
    lambda_n: float = 1.0

    def configuration(self) -> Configuration:
        if self.family is Family.C2V_RM_RMP:
            return _meridional_configuration(self.x, self.y)
        theta_p = math.acos(self.x)
        theta_m = math.acos(self.y)
        vortices = [
            Vortex(UnitVector3.from_spherical(theta_p, 0.0), 1.0),
            Vortex(UnitVector3.from_spherical(theta_p, math.pi), 1.0),
            Vortex(UnitVector3.from_spherical(theta_m, self.alpha), -1.0),
            Vortex(
                UnitVector3.from_spherical(theta_m, self.alpha + math.pi), -1.0
            ),
        ]
        if self.lambda_n != 0.0:
            vortices.append(Vortex(UnitVector3(0.0, 0.0, 1.0), self.lambda_n))
            vortices.append(Vortex(UnitVector3(0.0, 0.0, -1.0), -self.lambda_n))
            return Configuration(tuple(vortices), 2, Layout.standard(2, 2, 2))
        return Configuration(tuple(vortices), 0, Layout.standard(2, 2, 0))


def _meridional_configuration(x: float, y: float) -> Configuration:
    """Four vortices in the xz-plane: +1 at cos-heights x, -y; -1 at y, -x."""
    vortices = (
        Vortex(UnitVector3.from_spherical(math.acos(x), 0.0), 1.0),
        Vortex(UnitVector3.from_spherical(math.acos(-y), math.pi), 1.0),
        Vortex(UnitVector3.from_spherical(math.acos(y), math.pi), -1.0),
        Vortex(UnitVector3.from_spherical(math.acos(-x), 0.0), -1.0),
    )
    return Configuration(vortices, 0, Layout.standard(2, 2, 0))


def _certify(bp: BranchPoint) -> BranchPoint:
    """Verify a solved branch point is a genuine relative equilibrium."""
    config = bp.configuration()
    xi = configuration_angular_velocity(config)
    residual = re_residual(config, xi)
    if residual > 1e-8:
        raise OutOfDomain(
            f"branch point (x={bp.x:.6g}, y={bp.y:.6g}) fails the equilibrium "
            f"residual check ({residual:.3e})"
        )
    return bp


def branch_c2v_2R2p(x: float, lambda_n: float = 1.0) -> BranchPoint:
    """Aligned-rings branch with poles: solve for ``y`` given ``x``.

    The branch relation is ``x y - 1 + 2 lambda_n (y - x) = 0``, i.e.
    ``y = (2 lambda_n x + 1) / (x + 2 lambda_n)``.
    """
    if not (-1.0 < x < 1.0):
        raise OutOfDomain("x = cos(theta_+) must lie in (-1, 1)")
    if lambda_n == 0.0:
        raise OutOfDomain("this branch needs pole vortices (lambda_n != 0)")
    denom = x + 2.0 * lambda_n
    if abs(denom) < 1e-14:
        raise OutOfDomain("branch relation degenerates at x = -2 lambda_n")
    y = (2.0 * lambda_n * x + 1.0) / denom
    if not (-1.0 < y < 1.0):
        raise OutOfDomain(
            f"solved y = {y:.6g} leaves (-1, 1); x = {x:.6g} is outside the branch"
        )
    return _certify(BranchPoint(x, y, 0.0, Family.C2V_2R2P, lambda_n))


def _rrp2p_quartic(x: float, y: float, lambda_n: float) -> float:
    return (
        x * x * y * y
        - 2.0 * y * y
        - 2.0 * x * x
        + 2.0 * x * y
        + 1.0
        - 2.0 * lambda_n * (1.0 - x * y) * (x - y)
    )


def branch_c2v_RRp2p(x: float, lambda_n: float = 1.0, sign: int = 1) -> BranchPoint:
    """Right-angle-rings branch with poles: solve for ``y`` given ``x``.

    Solves the quartic branch relation (quadratic in ``y``); ``sign``
    selects the root

        y = -(x + lambda_n (x^2 + 1) +- (1 - x^2) sqrt(2 + lambda_n^2))
            / (x^2 - 2 (1 + lambda_n x)).
    """
    if not (-1.0 < x < 1.0):
        raise OutOfDomain("x = cos(theta_+) must lie in (-1, 1)")
    if sign not in (1, -1):
        raise OutOfDomain("sign must be +1 or -1")
    denom = x * x - 2.0 * (1.0 + lambda_n * x)
    if abs(denom) < 1e-14:
        raise OutOfDomain("branch relation degenerates at this x")
    root = math.sqrt(2.0 + lambda_n * lambda_n)
    y = -(x + lambda_n * (x * x + 1.0) + sign * (1.0 - x * x) * root) / denom
    if not (-1.0 < y < 1.0):
        raise OutOfDomain(
            f"solved y = {y:.6g} leaves (-1, 1); x = {x:.6g} is outside the branch"
        )
    resid = _rrp2p_quartic(x, y, lambda_n)
    if abs(resid) > 1e-10:
        raise OutOfDomain(
            f"quartic residual {resid:.3e} exceeds 1e-10 at (x, y) = "
            f"({x:.6g}, {y:.6g})"
        )
    return _certify(BranchPoint(x, y, math.pi / 2.0, Family.C2V_RRP2P, lambda_n))


def _rm_rmp_equation(x: float, y: float) -> float:
    return 2.0 * (
        y * x**3 + x * y**3 - x * x - y * y - x * y + 1.0
    ) - (x * x + y * y + 2.0 * x * y - 2.0) * math.sqrt(
        (1.0 - x * x) * (1.0 - y * y)
    )


def branch_c2v_RmRmp_all(x: float) -> tuple[BranchPoint, ...]:
    """All meridian-branch solutions with ``y`` in ``(x, 1)`` for this ``x``.

    The zero set of the branch equation consists of two arcs (mirror
    images under the half-turn), and a vertical line can cross an arc
    twice, so there may be zero, one, or two roots.  Roots are found by
    scanning a fine subdivision for sign changes and polishing each with
    bracketed root finding to machine precision (rigid-rotation
    certification divides by 1 - y**2, so near-pole roots need every
    digit); they are returned in increasing ``y`` order.  Points with
    ``y < x`` are the relabeled twins ``(y, x)`` of roots of other ``x``
    values and are not produced here.
    """
    if not (-1.0 < x < 1.0):
        raise OutOfDomain("x = cos(theta_+) must lie in (-1, 1)")
    lo = x + 1e-9
    hi = 1.0 - 1e-9
    if lo >= hi:
        return ()
    samples = 2000
    ys = np.linspace(lo, hi, samples)
    vals = np.array([_rm_rmp_equation(x, y) for y in ys])
    roots = []
    for k in range(samples - 1):
        va, vb = vals[k], vals[k + 1]
        if va == 0.0:
            roots.append(float(ys[k]))
        elif va * vb < 0.0:
            roots.append(
                float(
                    brentq(
                        lambda yy: _rm_rmp_equation(x, yy),
                        ys[k],
                        ys[k + 1],
                        xtol=1e-15,
                        rtol=4.0 * np.finfo(float).eps,
                    )
                )
            )
    return tuple(
        _certify(BranchPoint(x, y, math.pi, Family.C2V_RM_RMP, 0.0))
        for y in roots
    )


def branch_c2v_RmRmp(x: float) -> BranchPoint:
    """Meridian-plane branch: solve for ``y`` in ``(x, 1)`` given ``x``.

    The four vortices sit in a single vertical plane; no poles.  When the
    vertical line at ``x`` meets the branch twice, the root with the
    larger ``y`` (the arc through the great-circle square) is returned;
    :func:`branch_c2v_RmRmp_all` exposes every root.

    Raises
    ------
    NoRoot
        If the branch equation has no root with ``y`` in ``(x, 1)`` —
        notably at ``x = 0``, where the branch pinches off.
    """
    if not (-1.0 < x < 1.0 / math.sqrt(2.0)):
        raise OutOfDomain("x = cos(theta_+) must lie in (-1, 1/sqrt(2))")
    points = branch_c2v_RmRmp_all(x)
    if not points:
        raise NoRoot(
            f"the meridian branch equation has no root in ({x:.6g}, 1) "
            f"for x = {x:.6g}"
        )
    return points[-1]


# ---------------------------------------------------------------------------
# Two-ring phase test
# ---------------------------------------------------------------------------


def two_ring_phase_test(c: Configuration, tol: float = 1e-9) -> TwoRingPhase:
    """Classify the longitude offset between the + and - rings.

    Raises
    ------
    NotTwoRings
        If the non-pole vortices do not form two equally sized regular
        rings, each on a single latitude circle.
    """
    plus = [c.vortices[i].position for i in c.layout.plus]
    minus = [c.vortices[i].position for i in c.layout.minus]
    n = len(plus)
    if n < 2 or len(minus) != n:
        raise NotTwoRings(
            "need two equally sized ring populations with at least two "
            "vortices each"
        )
    phase = []
    for group in (plus, minus):
        zs = [v.z for v in group]
        if max(zs) - min(zs) > tol:
            raise NotTwoRings("ring vortices are not on a single latitude circle")
        if 1.0 - max(abs(z) for z in zs) < POLE_EPS:
            raise NotTwoRings("ring sits on a pole; longitudes are undefined")
        phis = sorted(math.atan2(v.y, v.x) % (2.0 * math.pi) for v in group)
        gaps = [
            (phis[(k + 1) % n] - phis[k]) % (2.0 * math.pi) for k in range(n)
        ]
        if max(gaps) - min(gaps) > n * tol:
            raise NotTwoRings("ring longitudes are not uniformly spaced")
        total = sum(math.e ** (1j * n * p) for p in phis)
        phase.append(math.atan2(total.imag, total.real) / n)
    period = 2.0 * math.pi / n
    offset = (phase[1] - phase[0]) % period
    if min(offset, period - offset) < tol:
        return TwoRingPhase.IN_PHASE
    if abs(offset - period / 2.0) < tol:
        return TwoRingPhase.OUT_OF_PHASE_BY_PI_OVER_N
    return TwoRingPhase.NEITHER
