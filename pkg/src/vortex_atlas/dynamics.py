"""Hamiltonian dynamics of point vortices on the unit sphere.

The motion of ``M`` vortices with strengths ``lambda_i`` at positions
``x_i`` is

    dx_i/dt = sum_{j != i} lambda_j (x_j x x_i) / (1 - x_i . x_j),

the Hamiltonian flow of

    H = sum_{i<j} lambda_i lambda_j ln l_ij^2,   l_ij^2 = 2 (1 - x_i . x_j)

with respect to the weighted area form ``omega_x(u, v) = lambda x.(u x v)``
summed over vortices.  Rotations about any axis are symmetries; the
conserved momentum map is ``Phi = sum_i lambda_i x_i``.

This module provides:

* evaluation of ``H``, ``Phi``, the vector field, and the augmented
  Hamiltonian ``H_xi = H + xi (Phi_z - mu)`` whose critical points are the
  relative equilibria rotating at rate ``xi`` about the z-axis;
* :class:`MixedChart` — co-latitude/longitude coordinates for ring
  vortices combined with tangent-plane coordinates for pole vortices,
  with analytic gradients, the chart symplectic matrix, momentum
  differentials, rotation generators, and finite-difference Hessians;
* an adaptive Dormand-Prince 5(4) integrator with per-step renormalization
  onto the sphere, drift monitoring, and near-collision abort;
* a flow-equivariance check for symmetry-group elements (time-preserving
  or time-reversing according to their character).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853

from .core import (
    COLLISION_EPS,
    Configuration,
    GroupElement,
    PoleSingularity,
    VortexError,
    apply_group_element,
    to_spherical,
)

__all__ = [
    "CollisionApproach",
    "StepSizeUnderflow",
    "AngularVelocity",
    "Trajectory",
    "MixedChart",
    "hamiltonian",
    "vector_field",
    "momentum_map",
    "augmented_hamiltonian",
    "integrate",
    "reversal_check",
]

# The integrator aborts (rather than grinding into a singularity) once any
# pair comes this close in chord distance.
NEAR_COLLISION_FACTOR = 10.0


class CollisionApproach(VortexError, RuntimeError):
    """Integration stopped because two vortices nearly collided.

    The trajectory accumulated so far is attached as ``.trajectory``.
    """

    def __init__(self, message: str, trajectory: "Trajectory") -> None:
        super().__init__(message)
        self.trajectory = trajectory


class StepSizeUnderflow(VortexError, RuntimeError):
    """The adaptive step fell below the resolvable scale.

    The trajectory accumulated so far is attached as ``.trajectory``.
    """

    def __init__(self, message: str, trajectory: "Trajectory") -> None:
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class AngularVelocity:
    """A rigid rotation rate about the z-axis."""

    z: float

    def vector(self) -> np.ndarray:
        return np.array([0.0, 0.0, self.z])

    def __float__(self) -> float:
        return float(self.z)


# ---------------------------------------------------------------------------
# Energy, momentum, vector field
# ---------------------------------------------------------------------------


def _pairwise_l2(p: np.ndarray) -> np.ndarray:
    """All squared chord distances ``|x_i - x_j|^2`` as an ``(M, M)`` matrix.

    Direct differencing keeps full precision for nearly coincident
    points, where the equivalent ``2 (1 - x_i . x_j)`` form cancels.
    """
    diff = p[:, None, :] - p[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _log_chord_hamiltonian(p: np.ndarray, lam: np.ndarray) -> float:
    l2 = _pairwise_l2(p)
    m = p.shape[0]
    iu = np.triu_indices(m, k=1)
    pair_l2 = l2[iu]
    if np.min(pair_l2) < COLLISION_EPS**2:
        from .core import CollisionError

        raise CollisionError("two vortices are within the collision threshold")
    weights = (lam[:, None] * lam[None, :])[iu]
    return float(np.sum(weights * np.log(pair_l2)))


def _field(p: np.ndarray, lam: np.ndarray) -> np.ndarray:
    denom = 0.5 * _pairwise_l2(p)  # equals 1 - x_i . x_j on the sphere
    np.fill_diagonal(denom, 1.0)
    w = lam[None, :] / denom
    np.fill_diagonal(w, 0.0)
    s = w @ p
    return np.cross(s, p)


def hamiltonian(c: Configuration) -> float:
    """Interaction energy ``sum_{i<j} lambda_i lambda_j ln l_ij^2``."""
    return _log_chord_hamiltonian(c.positions(), c.strengths())


def vector_field(c: Configuration) -> np.ndarray:
    """Right-hand side ``dx_i/dt`` as an ``(M, 3)`` array.

    Each row is tangent to the sphere at the corresponding vortex.
    """
    return _field(c.positions(), c.strengths())


def momentum_map(c: Configuration) -> np.ndarray:
    """Conserved momentum ``Phi = sum_i lambda_i x_i`` as a 3-vector."""
    return c.strengths() @ c.positions()


def augmented_hamiltonian(c: Configuration, xi: float, mu: float) -> float:
    """``H_xi = H + xi (Phi_z - mu)``; critical at relative equilibria."""
    phi_z = float(momentum_map(c)[2])
    return hamiltonian(c) + float(xi) * (phi_z - float(mu))


# ---------------------------------------------------------------------------
# Mixed chart
# ---------------------------------------------------------------------------


class MixedChart:
    """Canonical-style coordinates adapted to a configuration's layout.

    Ring vortices get co-latitude/longitude pairs; pole vortices get the
    ambient ``(x, y)`` components of their position (the z-component is
    reconstructed from the hemisphere the pole vortex lives in).  The
    degree-of-freedom ordering is::

        [theta (+ring ranks), theta (-ring ranks),
         phi   (+ring ranks), phi   (-ring ranks),
         x_n, y_n, x_s, y_s]

    where the trailing four entries appear only for configurations with a
    pole pair.  In these coordinates the symplectic form is block diagonal:
    ``lambda_i sin(theta_i) dtheta_i ^ dphi_i`` per ring vortex and
    ``(lambda_p / z_p) dx_p ^ dy_p`` per pole vortex, and the equations of
    motion read ``Omega(q) dq/dt = -grad H``.
    """

    def __init__(self, config: Configuration) -> None:
        layout = config.layout
        self.config = config
        self.ring = tuple(layout.plus) + tuple(layout.minus)
        self.n_ring = len(self.ring)
        self.poles: tuple[int, ...] = ()
        self.pole_signs: tuple[float, ...] = ()
        if config.pole_count == 2:
            self.poles = (layout.north, layout.south)
            signs = []
            for i in self.poles:
                z = config.vortices[i].position.z
                if z == 0.0:
                    raise PoleSingularity(
                        "pole vortex sits on the equator; its chart hemisphere "
                        "is undefined"
                    )
                signs.append(1.0 if z > 0 else -1.0)
            self.pole_signs = tuple(signs)
        self.dim = 2 * self.n_ring + 2 * len(self.poles)
        self.strengths = config.strengths()
        self.m = len(config)

    # -- coordinates <-> positions ------------------------------------------

    def coords(self, config: Configuration | None = None) -> np.ndarray:
        """Chart coordinates of ``config`` (default: the base configuration)."""
        config = self.config if config is None else config
        q = np.empty(self.dim)
        for r, i in enumerate(self.ring):
            sc = to_spherical(config.vortices[i].position)
            q[r] = sc.theta
            q[self.n_ring + r] = sc.phi
        for k, i in enumerate(self.poles):
            v = config.vortices[i].position
            q[2 * self.n_ring + 2 * k] = v.x
            q[2 * self.n_ring + 2 * k + 1] = v.y
        return q

    def positions(self, q: np.ndarray) -> np.ndarray:
        """Ambient positions ``(M, 3)`` for chart coordinates ``q``."""
        p = np.empty((self.m, 3))
        for r, i in enumerate(self.ring):
            th, ph = q[r], q[self.n_ring + r]
            st = math.sin(th)
            p[i] = (st * math.cos(ph), st * math.sin(ph), math.cos(th))
        for k, i in enumerate(self.poles):
            x, y = q[2 * self.n_ring + 2 * k], q[2 * self.n_ring + 2 * k + 1]
            r2 = x * x + y * y
            if r2 >= 1.0:
                raise PoleSingularity("pole chart coordinates left the hemisphere")
            p[i] = (x, y, self.pole_signs[k] * math.sqrt(1.0 - r2))
        return p

    def config_at(self, q: np.ndarray) -> Configuration:
        return self.config.with_positions(self.positions(q))

    # -- tangent frames -------------------------------------------------------

    def _frames(self, q: np.ndarray):
        """Per-dof tangent vectors ``d(position)/d(dof)`` and positions."""
        p = self.positions(q)
        frames = np.zeros((self.dim, self.m, 3))
        for r, i in enumerate(self.ring):
            th, ph = q[r], q[self.n_ring + r]
            st, ct = math.sin(th), math.cos(th)
            cp, sp = math.cos(ph), math.sin(ph)
            frames[r, i] = (ct * cp, ct * sp, -st)
            frames[self.n_ring + r, i] = (-st * sp, st * cp, 0.0)
        for k, i in enumerate(self.poles):
            z = p[i, 2]
            x, y = p[i, 0], p[i, 1]
            frames[2 * self.n_ring + 2 * k, i] = (1.0, 0.0, -x / z)
            frames[2 * self.n_ring + 2 * k + 1, i] = (0.0, 1.0, -y / z)
        return p, frames

    # -- differential objects -------------------------------------------------

    def gradient(self, q: np.ndarray, xi: float) -> np.ndarray:
        """Analytic chart gradient of the augmented Hamiltonian ``H_xi``.

        The ambient gradient is ``grad_i H = -lambda_i S_i`` with
        ``S_i = sum_{j != i} lambda_j x_j / (1 - x_i . x_j)``, plus
        ``xi lambda_i e_z`` from the momentum term; chart components are
        its pairings with the per-dof tangent vectors.
        """
        p, frames = self._frames(q)
        denom = 0.5 * _pairwise_l2(p)
        np.fill_diagonal(denom, 1.0)
        w = self.strengths[None, :] / denom
        np.fill_diagonal(w, 0.0)
        s = w @ p
        ambient = -self.strengths[:, None] * s
        ambient[:, 2] += float(xi) * self.strengths
        return np.einsum("dmk,mk->d", frames, ambient)

    def corotating_field(self, q: np.ndarray, xi: float) -> np.ndarray:
        """Chart velocity in the frame rotating about z at rate ``xi``.

        Computed from the ambient vector field (an independent route from
        :meth:`gradient`): ``dx_i/dt - xi e_z x x_i`` projected onto the
        chart frames.
        """
        p, _ = self._frames(q)
        v = _field(p, self.strengths)
        v[:, 0] += float(xi) * p[:, 1]
        v[:, 1] -= float(xi) * p[:, 0]
        dq = np.empty(self.dim)
        for r, i in enumerate(self.ring):
            th, ph = q[r], q[self.n_ring + r]
            st, ct = math.sin(th), math.cos(th)
            cp, sp = math.cos(ph), math.sin(ph)
            theta_hat = np.array([ct * cp, ct * sp, -st])
            phi_hat = np.array([-sp, cp, 0.0])
            dq[r] = v[i] @ theta_hat
            dq[self.n_ring + r] = (v[i] @ phi_hat) / st
        for k, i in enumerate(self.poles):
            dq[2 * self.n_ring + 2 * k] = v[i, 0]
            dq[2 * self.n_ring + 2 * k + 1] = v[i, 1]
        return dq

    def symplectic_matrix(self, q: np.ndarray) -> np.ndarray:
        """Chart matrix of the weighted area form at ``q``."""
        omega = np.zeros((self.dim, self.dim))
        p = self.positions(q)
        for r, i in enumerate(self.ring):
            w = self.strengths[i] * math.sin(q[r])
            omega[r, self.n_ring + r] = w
            omega[self.n_ring + r, r] = -w
        for k, i in enumerate(self.poles):
            a = 2 * self.n_ring + 2 * k
            w = self.strengths[i] / p[i, 2]
            omega[a, a + 1] = w
            omega[a + 1, a] = -w
        return omega

    def momentum_rows(self, q: np.ndarray) -> np.ndarray:
        """Differential of the momentum map: a ``(3, dim)`` matrix."""
        _, frames = self._frames(q)
        return np.einsum("dmk,m->kd", frames, self.strengths)

    def rotation_generators(self, q: np.ndarray, axes: np.ndarray) -> np.ndarray:
        """Chart components of the rotation generators ``x -> e x x``.

        ``axes`` is ``(n_axes, 3)``; the result is ``(n_axes, dim)``.
        """
        p, frames = self._frames(q)
        axes = np.atleast_2d(np.asarray(axes, dtype=float))
        out = np.empty((axes.shape[0], self.dim))
        for a, e in enumerate(axes):
            v = np.cross(e[None, :], p)
            for r, i in enumerate(self.ring):
                th, ph = q[r], q[self.n_ring + r]
                st, ct = math.sin(th), math.cos(th)
                cp, sp = math.cos(ph), math.sin(ph)
                theta_hat = np.array([ct * cp, ct * sp, -st])
                phi_hat = np.array([-sp, cp, 0.0])
                out[a, r] = v[i] @ theta_hat
                out[a, self.n_ring + r] = (v[i] @ phi_hat) / st
            for k, i in enumerate(self.poles):
                out[a, 2 * self.n_ring + 2 * k] = v[i, 0]
                out[a, 2 * self.n_ring + 2 * k + 1] = v[i, 1]
        return out

    def hessian_fd(self, q: np.ndarray, xi: float, step: float = 1e-5) -> np.ndarray:
        """Hessian of ``H_xi`` by central differences of the analytic gradient."""
        h = np.empty((self.dim, self.dim))
        for k in range(self.dim):
            dq = np.zeros(self.dim)
            dq[k] = step
            h[:, k] = (self.gradient(q + dq, xi) - self.gradient(q - dq, xi)) / (
                2.0 * step
            )
        return h


# ---------------------------------------------------------------------------
# Trajectories and integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """Time series produced by :func:`integrate`.

    ``times`` is strictly increasing and starts at 0; ``h_drift`` and
    ``phi_drift`` record ``|H(t) - H(0)|`` and ``max_k |Phi_k(t) - Phi_k(0)|``
    at each stored time.
    """

    times: tuple[float, ...]
    states: tuple[Configuration, ...]
    h_drift: tuple[float, ...]
    phi_drift: tuple[float, ...]

    def final_state(self) -> Configuration:
        return self.states[-1]

    def to_csv(self) -> str:
        m = len(self.states[0])
        header = ["t"]
        for i in range(1, m + 1):
            header += [f"x{i}", f"y{i}", f"z{i}"]
        header += ["H", "|dH|", "|dPhi|_inf"]
        lines = [",".join(header)]
        for t, state, dh, dphi in zip(
            self.times, self.states, self.h_drift, self.phi_drift
        ):
            row = [_fmt(t)]
            for v in state.vortices:
                row += [_fmt(v.position.x), _fmt(v.position.y), _fmt(v.position.z)]
            row += [_fmt(hamiltonian(state)), _fmt(dh), _fmt(dphi)]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return "%.12g" % float(x)


def _min_chord(p: np.ndarray) -> float:
    l2 = _pairwise_l2(p)
    iu = np.triu_indices(p.shape[0], k=1)
    return math.sqrt(max(0.0, float(np.min(l2[iu]))))


def integrate(c0: Configuration, t_end: float, tol: float = 1e-10) -> Trajectory:
    """Evolve ``c0`` to time ``t_end > 0`` with accuracy target ``tol``.

    Steps an adaptive high-order embedded Runge-Kutta pair (Dormand-Prince
    8(5,3)) on the ambient Cartesian coordinates, renormalizing every
    accepted state back onto the unit sphere.  The per-step error is held
    three orders below ``tol`` so that the accumulated energy and momentum
    drift stays near ``tol`` over desk-scale horizons; both drifts are
    recorded at every accepted step, monitored rather than enforced.

    Raises
    ------
    CollisionApproach
        If any pair comes within ``10 * COLLISION_EPS`` in chord distance;
        the partial trajectory is attached to the exception.
    StepSizeUnderflow
        If the step size collapses beneath the resolvable scale.
    """
    if not (t_end > 0.0) or not math.isfinite(t_end):
        raise ValueError("t_end must be a positive finite time")
    if not (0.0 < tol < 1.0):
        raise ValueError("tol must lie in (0, 1)")

    lam = c0.strengths()
    y = c0.positions()
    h0_val = _log_chord_hamiltonian(y, lam)
    phi0 = lam @ y

    times = [0.0]
    states = [c0]
    h_drift = [0.0]
    phi_drift = [0.0]

    def partial() -> Trajectory:
        return Trajectory(tuple(times), tuple(states), tuple(h_drift), tuple(phi_drift))

    guard = NEAR_COLLISION_FACTOR * COLLISION_EPS
    if _min_chord(y) < guard:
        raise CollisionApproach(
            "initial configuration is already within the near-collision guard",
            partial(),
        )

    m = len(lam)

    def rhs(_t: float, flat: np.ndarray) -> np.ndarray:
        return _field(flat.reshape(m, 3), lam).reshape(-1)

    step_tol = 1e-3 * tol
    solver = DOP853(rhs, 0.0, y.reshape(-1), t_end, rtol=step_tol, atol=step_tol)
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StepSizeUnderflow(
                f"step size underflow at t = {solver.t:.6g}: {message}",
                partial(),
            )
        y = solver.y.reshape(m, 3)
        y = y / np.linalg.norm(y, axis=1, keepdims=True)
        solver.y = y.reshape(-1)
        solver.f = rhs(solver.t, solver.y)
        times.append(float(solver.t))
        states.append(c0.with_positions(y))
        h_drift.append(abs(_log_chord_hamiltonian(y, lam) - h0_val))
        phi_drift.append(float(np.max(np.abs(lam @ y - phi0))))
        if _min_chord(y) < guard:
            raise CollisionApproach(
                f"near-collision at t = {solver.t:.6g}", partial()
            )

    return partial()


def reversal_check(c0: Configuration, g: GroupElement, t: float = 1.0) -> float:
    """Flow-equivariance defect of a symmetry-group element.

    Compares ``flow_t(g . c0)`` with ``g . flow_{chi(g) t}(c0)`` and returns
    the max-norm position discrepancy; backward evolution is realized as the
    forward flow of the strength-negated configuration.
    """
    left = integrate(apply_group_element(g, c0), t).final_state().positions()
    if g.chi == 1:
        base = integrate(c0, t).final_state()
    else:
        reversed_flow = integrate(c0.with_negated_strengths(), t).final_state()
        base = reversed_flow.with_negated_strengths()
    right = apply_group_element(g, base).positions()
    return float(np.max(np.abs(left - right)))
