"""Command line and batch layer over the vortex families.

Five commands:

``simulate``
    Integrate a configuration file and write the trajectory as CSV.
``classify``
    Run the stability analysis for a family descriptor (or a raw
    configuration) and print the report as JSON.
``sweep``
    Evaluate a latitude grid over one or more ring families and write
    one CSV row per grid point.
``diagram``
    Trace every branch of the energy-momentum diagram for 2 or 3 vortex
    pairs, emit an SVG figure plus the underlying CSV, and report the
    detected pitchfork bifurcations.
``thresholds``
    Recompute every tabulated critical latitude and report it next to
    its reference value.

Exit codes: 0 success, 1 usage error, 2 input error, 3 numeric failure.
All CSV floats are formatted with ``%.12g`` so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .core import (
    Configuration,
    Family,
    FamilyDescriptor,
    VortexError,
)
from .dynamics import (
    CollisionApproach,
    StepSizeUnderflow,
    hamiltonian,
    integrate,
    momentum_map,
)
from .equilibria import (
    OutOfDomain,
    branch_c2v_RmRmp_all,
    branch_c2v_RRp2p,
    configuration_angular_velocity,
    make_equatorial_pm_ring,
    make_family,
    make_plus_ring_pole_pair,
)
from .stability import (
    REFERENCE_THRESHOLDS,
    DegenerateForm,
    NoTransition,
    NotRelativeEquilibrium,
    Verdict,
    analyze,
    analyze_small,
    critical_latitude,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_SWEEP_COLUMNS = (
    "family",
    "N",
    "theta0",
    "mu_z",
    "xi_z",
    "H",
    "verdict",
    "deciding_block",
)
_THRESHOLD_COLUMNS = (
    "family",
    "N",
    "k_p",
    "transition",
    "theta_star",
    "reference_value",
    "abs_delta",
)
_DIAGRAM_COLUMNS = ("branch", "param", "mu_z", "energy", "verdict")


def _fmt(x: float) -> str:
    return "%.12g" % float(x)


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """A latitude grid over a set of ring families.

    ``grid()`` excludes the chart singularities at 0 and pi, and steps
    from ``theta_start`` to ``theta_stop`` inclusive.
    """

    families: tuple[str, ...]
    n_values: tuple[int, ...]
    theta_start: float
    theta_stop: float
    theta_step: float
    k_p: int = 0
    lambda_n: float = 1.0

    def __post_init__(self) -> None:
        if self.theta_step <= 0.0:
            raise OutOfDomain("theta_step must be positive")
        if not self.families:
            raise OutOfDomain("at least one family is required")
        if any(n < 2 for n in self.n_values):
            raise OutOfDomain("ring sizes must be at least 2")

    def grid(self) -> tuple[float, ...]:
        if self.theta_stop < self.theta_start:
            return ()
        values = np.arange(
            self.theta_start,
            self.theta_stop + 0.5 * self.theta_step,
            self.theta_step,
        )
        keep = (values > 1e-9) & (values < math.pi - 1e-9)
        return tuple(float(v) for v in values[keep])


def _sweep_row(
    family: str, n: int, theta: float, k_p: int, lambda_n: float
) -> tuple[str, ...]:
    base = (family, str(n), _fmt(theta))
    try:
        desc = FamilyDescriptor.from_mapping(
            {
                "family": family,
                "N": n,
                "theta0": theta,
                "kp": k_p,
                "lambda_n": lambda_n,
            }
        )
        report = analyze(desc)
        energy = hamiltonian(make_family(desc))
    except VortexError:
        return base + ("", "", "", "error", "")
    return base + (
        _fmt(report.mu_z),
        _fmt(report.xi_z),
        _fmt(energy),
        report.verdict.value,
        report.deciding_block,
    )


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> list[tuple[str, ...]]:
    """Evaluate the grid concurrently; rows come back in grid order."""
    jobs = [
        (family, n, theta)
        for family in spec.families
        for n in spec.n_values
        for theta in spec.grid()
    ]
    if not jobs:
        return []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(
            pool.map(
                lambda j: _sweep_row(j[0], j[1], j[2], spec.k_p, spec.lambda_n),
                jobs,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# diagram
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramPoint:
    """One plotted point: a configuration's momentum, energy, and verdict."""

    branch_label: str
    param: float
    mu_z: float
    energy: float
    verdict: str


@dataclass
class _Segment:
    """A continuously parametrized piece of one diagram branch.

    ``maker`` maps the parameter to ``(mu_z, energy, verdict)`` or ``None``
    when the parameter leaves the branch domain; it is reused to refine
    bifurcation candidates after the initial sampling.
    """

    label: str
    params: np.ndarray
    maker: Callable[[float], tuple[float, float, str] | None]
    is_parent: bool
    points: list[DiagramPoint] = field(default_factory=list)

    def sample(self) -> None:
        for p in self.params:
            got = self.maker(float(p))
            if got is None:
                continue
            mu, energy, verdict = got
            self.points.append(
                DiagramPoint(self.label, float(p), mu, energy, verdict)
            )


@dataclass(frozen=True)
class Bifurcation:
    """A detected pitchfork: a child branch leaving a symmetric parent."""

    kind: str
    mu_z: float
    energy: float
    parent: str
    child: str


@dataclass(frozen=True)
class Diagram:
    n_pairs: int
    segments: tuple[_Segment, ...]
    fixed_point: DiagramPoint
    bifurcations: tuple[Bifurcation, ...]

    def points(self) -> list[DiagramPoint]:
        out = [p for seg in self.segments for p in seg.points]
        out.append(self.fixed_point)
        return out


def _ring_maker(
    family: Family, n: int, k_p: int
) -> Callable[[float], tuple[float, float, str] | None]:
    def maker(theta: float) -> tuple[float, float, str] | None:
        try:
            desc = FamilyDescriptor(family, n_per_ring=n, theta0=theta, k_p=k_p)
            report = analyze(desc)
            energy = hamiltonian(make_family(desc))
        except VortexError:
            return None
        return report.mu_z, energy, report.verdict.value

    return maker


def _config_point(config: Configuration) -> tuple[float, float, str]:
    xi = configuration_angular_velocity(config)
    report = analyze_small(config, xi_z=xi)
    return (
        float(momentum_map(config)[2]),
        hamiltonian(config),
        report.verdict.value,
    )


def _branch_maker(
    solver: Callable[[float], Configuration]
) -> Callable[[float], tuple[float, float, str] | None]:
    def maker(x: float) -> tuple[float, float, str] | None:
        try:
            return _config_point(solver(x))
        except VortexError:
            return None

    return maker


def _meridional_maker(
    root_index: int, swap: bool
) -> Callable[[float], tuple[float, float, str] | None]:
    def maker(x: float) -> tuple[float, float, str] | None:
        try:
            roots = branch_c2v_RmRmp_all(x)
        except VortexError:
            return None
        if root_index >= len(roots):
            return None
        bp = roots[root_index]
        xx, yy = (bp.y, bp.x) if swap else (bp.x, bp.y)
        replaced = type(bp)(xx, yy, bp.alpha, bp.family, bp.lambda_n)
        try:
            return _config_point(replaced.configuration())
        except VortexError:
            return None

    return maker


def _figure_segments(n_pairs: int) -> list[_Segment]:
    if n_pairs not in (2, 3):
        raise OutOfDomain("the diagram is built for 2 or 3 vortex pairs")
    # Grid edges stay clear of chart singularities and vortex collisions,
    # where the energy diverges and would squash the plotted range.
    pts = 241
    half = np.linspace(0.1, math.pi / 2 - 0.05, pts)
    half_closed = np.linspace(0.1, math.pi / 2, pts)
    full = np.linspace(0.1, math.pi - 0.1, 2 * pts)
    full_gapped = full[np.abs(full - math.pi / 2) > 0.05]
    interval = np.linspace(-0.97, 0.97, 2 * pts)
    segments: list[_Segment] = []
    if n_pairs == 2:
        for sign in (-1, 1):
            segments.append(
                _Segment(
                    "(a) C2v(R,R')",
                    interval,
                    _branch_maker(
                        lambda x, s=sign: branch_c2v_RRp2p(x, 0.0, s).configuration()
                    ),
                    is_parent=False,
                )
            )
        segments.append(
            _Segment(
                "(b) D2h(2R)",
                half,
                _ring_maker(Family.DNH_2R, 2, 0),
                is_parent=True,
            )
        )
        meridional_x = np.linspace(-0.98, 1 / math.sqrt(2.0) - 1e-4, 2 * pts)
        for root_index in (0, 1):
            for swap in (False, True):
                segments.append(
                    _Segment(
                        "(c) C2v(Rm,Rm')",
                        meridional_x,
                        _meridional_maker(root_index, swap),
                        is_parent=False,
                    )
                )
        segments.append(
            _Segment(
                "(d) D2d(R,R')",
                half_closed,
                _ring_maker(Family.DND_RRP, 2, 0),
                is_parent=True,
            )
        )
        segments.append(
            _Segment(
                "(e) C2v(R,2p)",
                full,
                _branch_maker(lambda th: make_plus_ring_pole_pair(th)),
                is_parent=False,
            )
        )
    else:
        segments.append(
            _Segment(
                "(a) D3h(2R)",
                half,
                _ring_maker(Family.DNH_2R, 3, 0),
                is_parent=True,
            )
        )
        segments.append(
            _Segment(
                "(b) D2h(2R,2p)",
                full_gapped,
                _ring_maker(Family.DNH_2R, 2, 2),
                is_parent=True,
            )
        )
        segments.append(
            _Segment(
                "(c) C2v(R,R',2p)",
                interval,
                _branch_maker(lambda x: branch_c2v_RRp2p(x, 1.0, -1).configuration()),
                is_parent=False,
            )
        )
        segments.append(
            _Segment(
                "(d) D3d(R,R')",
                half_closed,
                _ring_maker(Family.DND_RRP, 3, 0),
                is_parent=True,
            )
        )
        segments.append(
            _Segment(
                "(e) D2d(R,R',2p)",
                full,
                _ring_maker(Family.DND_RRP, 2, 2),
                is_parent=True,
            )
        )
    return segments


def _bisect_parent(seg: _Segment, lo: float, hi: float) -> float:
    got = seg.maker(lo)
    assert got is not None
    v_lo = got[2]
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        got = seg.maker(mid)
        if got is not None and got[2] == v_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _nearest_on_segment(
    seg: _Segment, mu_star: float, h_star: float
) -> tuple[float, float, float]:
    """Refine the segment point closest to (mu*, H*); returns (dist, mu, param)."""

    def dist(point: DiagramPoint) -> float:
        return math.hypot(point.mu_z - mu_star, point.energy - h_star)

    if not seg.points:
        return math.inf, math.nan, math.nan
    best = min(seg.points, key=dist)
    lo = best.param - 2.0 * _param_step(seg)
    hi = best.param + 2.0 * _param_step(seg)
    best_d, best_mu, best_p = dist(best), best.mu_z, best.param
    for _ in range(4):
        for p in np.linspace(lo, hi, 41):
            got = seg.maker(float(p))
            if got is None:
                continue
            d = math.hypot(got[0] - mu_star, got[1] - h_star)
            if d < best_d:
                best_d, best_mu, best_p = d, got[0], float(p)
        width = (hi - lo) / 8.0
        lo, hi = best_p - width, best_p + width
    return best_d, best_mu, best_p


def _param_step(seg: _Segment) -> float:
    return float(seg.params[1] - seg.params[0]) if len(seg.params) > 1 else 1e-2


def _child_side(
    seg: _Segment, param_star: float, mu_star: float, window: float
) -> float:
    """Average child momentum offset from the junction, within the window."""
    offsets = [
        p.mu_z - mu_star
        for p in seg.points
        if abs(p.param - param_star) <= window and abs(p.mu_z - mu_star) > 1e-9
    ]
    return float(np.mean(offsets)) if offsets else 0.0


def _detect_bifurcations(segments: list[_Segment]) -> tuple[Bifurcation, ...]:
    """Pitchforks: a parent verdict change met by a child branch in (mu, H).

    A candidate needs a verdict change along a symmetric (descriptor-built)
    branch and a low-symmetry branch passing within 1e-3 of the change
    point in the (momentum, energy) plane.  The label is read from which
    side of the junction the child lives on: the parent's Lyapunov side
    gives a subcritical pitchfork, the other side a supercritical one.
    """
    found: list[Bifurcation] = []
    lyap = Verdict.LYAPUNOV_STABLE.value
    for parent in segments:
        if not parent.is_parent:
            continue
        for a, b in zip(parent.points, parent.points[1:]):
            if a.verdict == b.verdict:
                continue
            if lyap not in (a.verdict, b.verdict):
                continue
            theta_star = _bisect_parent(parent, a.param, b.param)
            got = parent.maker(theta_star)
            if got is None:
                continue
            mu_star, h_star, _ = got
            lyap_side = (
                a.mu_z - mu_star if a.verdict == lyap else b.mu_z - mu_star
            )
            for child in segments:
                if child.is_parent or not child.points:
                    continue
                d, _, p_star = _nearest_on_segment(child, mu_star, h_star)
                if d > 1e-3:
                    continue
                side = _child_side(child, p_star, mu_star, 40.0 * _param_step(child))
                kind = (
                    "subcritical" if side * lyap_side > 0.0 else "supercritical"
                )
                bif = Bifurcation(kind, mu_star, h_star, parent.label, child.label)
                if not any(
                    existing.parent == bif.parent
                    and existing.child == bif.child
                    and abs(existing.mu_z - bif.mu_z) < 1e-6
                    for existing in found
                ):
                    found.append(bif)
    return tuple(found)


def build_diagram(n_pairs: int) -> Diagram:
    """Sample every branch of the figure and detect its pitchforks."""
    segments = _figure_segments(n_pairs)
    for seg in segments:
        seg.sample()
    fixed = make_equatorial_pm_ring(n_pairs)
    fixed_report = analyze(
        FamilyDescriptor(Family.EQUATORIAL_PM_RING, n_per_ring=n_pairs)
    )
    fixed_point = DiagramPoint(
        "E",
        math.pi / 2,
        float(momentum_map(fixed)[2]),
        hamiltonian(fixed),
        fixed_report.verdict.value,
    )
    return Diagram(
        n_pairs=n_pairs,
        segments=tuple(segments),
        fixed_point=fixed_point,
        bifurcations=_detect_bifurcations(segments),
    )


_BRANCH_COLORS = {
    "(a)": "#1f77b4",
    "(b)": "#d62728",
    "(c)": "#2ca02c",
    "(d)": "#9467bd",
    "(e)": "#ff7f0e",
}
_VERDICT_DASH = {
    Verdict.LYAPUNOV_STABLE.value: None,
    Verdict.LINEARLY_STABLE.value: "7 4",
    Verdict.LINEARLY_UNSTABLE.value: "2 4",
    Verdict.INDETERMINATE.value: "1 6",
}


def _svg_pieces_for_segment(
    seg: _Segment, sx: Callable[[float], float], sy: Callable[[float], float]
) -> list[str]:
    """Polylines split wherever the verdict changes or the curve jumps."""
    pieces: list[str] = []
    color = _BRANCH_COLORS.get(seg.label[:3], "#444444")
    run: list[DiagramPoint] = []

    def flush() -> None:
        if len(run) < 2:
            run.clear()
            return
        dash = _VERDICT_DASH.get(run[0].verdict)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(
            f"{sx(p.mu_z):.3f},{sy(p.energy):.3f}" for p in run
        )
        pieces.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2"'
            f'{dash_attr} points="{coords}"/>'
        )
        run.clear()

    prev: DiagramPoint | None = None
    for p in seg.points:
        if prev is not None:
            jump = math.hypot(p.mu_z - prev.mu_z, p.energy - prev.energy)
            if p.verdict != prev.verdict or jump > 0.6:
                if run and p.verdict != prev.verdict and jump <= 0.6:
                    run.append(p)
                flush()
        run.append(p)
        prev = p
    flush()
    return pieces


def render_svg(diagram: Diagram) -> str:
    """Hand-emitted SVG: axes, styled branch polylines, E, bifurcations."""
    width, height = 760.0, 560.0
    left, right, top, bottom = 64.0, 14.0, 40.0, 48.0
    pts = diagram.points()
    mus = [p.mu_z for p in pts]
    energies = [p.energy for p in pts]
    mu_lo, mu_hi = min(mus), max(mus)
    e_lo, e_hi = min(energies), max(energies)
    mu_pad = 0.06 * (mu_hi - mu_lo) or 1.0
    e_pad = 0.06 * (e_hi - e_lo) or 1.0
    mu_lo, mu_hi = mu_lo - mu_pad, mu_hi + mu_pad
    e_lo, e_hi = e_lo - e_pad, e_hi + e_pad

    def sx(mu: float) -> float:
        return left + (mu - mu_lo) / (mu_hi - mu_lo) * (width - left - right)

    def sy(e: float) -> float:
        return height - bottom - (e - e_lo) / (e_hi - e_lo) * (
            height - top - bottom
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">'
        f"Energy-momentum diagram, {diagram.n_pairs} vortex pairs</text>",
    ]
    axis_style = 'stroke="#222" stroke-width="1"'
    parts.append(
        f'<line x1="{left:.1f}" y1="{height - bottom:.1f}" '
        f'x2="{width - right:.1f}" y2="{height - bottom:.1f}" {axis_style}/>'
    )
    parts.append(
        f'<line x1="{left:.1f}" y1="{top:.1f}" x2="{left:.1f}" '
        f'y2="{height - bottom:.1f}" {axis_style}/>'
    )
    for tick in np.linspace(mu_lo, mu_hi, 7):
        x = sx(float(tick))
        parts.append(
            f'<line x1="{x:.1f}" y1="{height - bottom:.1f}" x2="{x:.1f}" '
            f'y2="{height - bottom + 5:.1f}" {axis_style}/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{height - bottom + 18:.1f}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{tick:.2g}</text>"
        )
    for tick in np.linspace(e_lo, e_hi, 7):
        y = sy(float(tick))
        parts.append(
            f'<line x1="{left - 5:.1f}" y1="{y:.1f}" x2="{left:.1f}" '
            f'y2="{y:.1f}" {axis_style}/>'
        )
        parts.append(
            f'<text x="{left - 8:.1f}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tick:.2g}</text>'
        )
    parts.append(
        f'<text x="{width - right:.1f}" y="{height - 10:.1f}" '
        f'text-anchor="end" font-family="sans-serif" font-size="12">'
        "vertical momentum</text>"
    )
    parts.append(
        f'<text x="16" y="{top - 8:.1f}" font-family="sans-serif" '
        'font-size="12">energy</text>'
    )

    for seg in diagram.segments:
        parts.extend(_svg_pieces_for_segment(seg, sx, sy))

    ex, ey = sx(diagram.fixed_point.mu_z), sy(diagram.fixed_point.energy)
    parts.append(f'<circle cx="{ex:.1f}" cy="{ey:.1f}" r="4" fill="#000"/>')
    parts.append(
        f'<text x="{ex + 7:.1f}" y="{ey - 6:.1f}" font-family="sans-serif" '
        'font-size="13">E</text>'
    )
    for bif in diagram.bifurcations:
        bx, by = sx(bif.mu_z), sy(bif.energy)
        parts.append(
            f'<path d="M {bx - 5:.1f} {by - 5:.1f} L {bx + 5:.1f} {by + 5:.1f} '
            f'M {bx - 5:.1f} {by + 5:.1f} L {bx + 5:.1f} {by - 5:.1f}" '
            'stroke="#000" stroke-width="1.6"/>'
        )
        parts.append(
            f'<text x="{bx + 7:.1f}" y="{by + 4:.1f}" font-family="sans-serif" '
            f'font-size="11">{bif.kind} pitchfork, momentum {bif.mu_z:.3f}</text>'
        )

    seen: list[str] = []
    for seg in diagram.segments:
        if seg.label not in seen:
            seen.append(seg.label)
    for k, label in enumerate(seen):
        y = top + 16.0 * k + 8.0
        color = _BRANCH_COLORS.get(label[:3], "#444444")
        parts.append(
            f'<line x1="{width - 206:.1f}" y1="{y:.1f}" '
            f'x2="{width - 186:.1f}" y2="{y:.1f}" stroke="{color}" '
            'stroke-width="2.5"/>'
        )
        parts.append(
            f'<text x="{width - 180:.1f}" y="{y + 4:.1f}" '
            f'font-family="sans-serif" font-size="12">{label}</text>'
        )
    style_y = top + 16.0 * len(seen) + 16.0
    for k, (name, dash) in enumerate(
        (
            ("Lyapunov stable", None),
            ("linearly stable", "7 4"),
            ("unstable", "2 4"),
        )
    ):
        y = style_y + 16.0 * k
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<line x1="{width - 206:.1f}" y1="{y:.1f}" '
            f'x2="{width - 186:.1f}" y2="{y:.1f}" stroke="#222" '
            f'stroke-width="2"{dash_attr}/>'
        )
        parts.append(
            f'<text x="{width - 180:.1f}" y="{y + 4:.1f}" '
            f'font-family="sans-serif" font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def diagram_csv(diagram: Diagram) -> str:
    rows = [
        (p.branch_label, _fmt(p.param), _fmt(p.mu_z), _fmt(p.energy), p.verdict)
        for p in diagram.points()
    ]
    return _csv(_DIAGRAM_COLUMNS, rows)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        text = Path(args.config).read_text()
        config = Configuration.from_json(text)
    except (OSError, ValueError, VortexError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        trajectory = integrate(config, args.t_end, tol=args.tol)
    except (CollisionApproach, StepSizeUnderflow) as exc:
        _write_text(args.out, exc.trajectory.to_csv())
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VortexError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _write_text(args.out, trajectory.to_csv())
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    raw = args.descriptor
    try:
        if not raw.lstrip().startswith("{"):
            raw = Path(raw).read_text()
        payload = json.loads(raw)
        if not isinstance(payload, dict):
            raise ValueError("descriptor JSON must be an object")
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if "vortices" in payload:
            config = Configuration.from_json(json.dumps(payload))
            report = analyze_small(config)
        else:
            desc = FamilyDescriptor.from_mapping(payload)
            report = analyze(desc)
    except (NotRelativeEquilibrium, DegenerateForm) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VortexError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_text(args.out, report.to_json(indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        spec = SweepSpec(
            families=tuple(args.family),
            n_values=_parse_int_list(args.n),
            theta_start=args.theta_start,
            theta_stop=args.theta_stop,
            theta_step=args.grid_step,
            k_p=args.kp,
            lambda_n=args.lambda_n,
        )
    except VortexError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = run_sweep(spec, max_workers=args.jobs)
    if args.format == "json":
        payload = [dict(zip(_SWEEP_COLUMNS, row)) for row in rows]
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write_text(args.out, _csv(_SWEEP_COLUMNS, rows))
    return EXIT_OK


def cmd_diagram(args: argparse.Namespace) -> int:
    try:
        diagram = build_diagram(args.pairs)
    except VortexError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = args.out or f"diagram-{args.pairs}-pairs.svg"
    try:
        _write_text(out, render_svg(diagram))
        csv_path = str(Path(out).with_suffix(".csv"))
        _write_text(csv_path, diagram_csv(diagram))
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for bif in diagram.bifurcations:
        print(
            f"{bif.kind} pitchfork at momentum {_fmt(bif.mu_z)}: "
            f"{bif.parent} meets {bif.child}"
        )
    print(f"wrote {out} and {csv_path}")
    return EXIT_OK


def cmd_thresholds(args: argparse.Namespace) -> int:
    rows = []
    for ref in REFERENCE_THRESHOLDS:
        try:
            theta = critical_latitude(
                ref.family,
                ref.n_per_ring,
                ref.k_p,
                ref.transition,
                ref.occurrence,
                grid_step=args.grid_step,
                tol=args.tol,
            )
        except NoTransition as exc:
            print(
                f"note: {ref.family.value} N={ref.n_per_ring} k_p={ref.k_p} "
                f"{ref.transition}: {exc}",
                file=sys.stderr,
            )
            continue
        rows.append(
            (
                ref.family.value,
                str(ref.n_per_ring),
                str(ref.k_p),
                ref.transition,
                _fmt(theta),
                _fmt(ref.reference_value),
                _fmt(abs(theta - ref.reference_value)),
            )
        )
    if args.format == "json":
        payload = [dict(zip(_THRESHOLD_COLUMNS, row)) for row in rows]
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write_text(args.out, _csv(_THRESHOLD_COLUMNS, rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise OutOfDomain(
            f"ring sizes must be an integer, a comma list, or lo..hi: {text!r}"
        ) from exc


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with code 1."""

    def error(self, message: str):  # noqa: ANN201 - argparse signature
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="vortex-atlas",
        description="Point-vortex relative equilibria: simulate, classify, "
        "sweep, diagram, thresholds.",
    )
    sub = parser.add_subparsers(dest="command")

    p_sim = sub.add_parser("simulate", help="integrate a configuration file")
    p_sim.add_argument("config", help="configuration JSON file")
    p_sim.add_argument("--t-end", type=float, default=10.0)
    p_sim.add_argument("--tol", type=float, default=1e-10)
    p_sim.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_sim.set_defaults(func=cmd_simulate)

    p_cls = sub.add_parser(
        "classify", help="stability report for a descriptor or configuration"
    )
    p_cls.add_argument(
        "descriptor", help="JSON object (inline) or path to a JSON file"
    )
    p_cls.add_argument("--out", default=None, help="JSON path (default stdout)")
    p_cls.set_defaults(func=cmd_classify)

    p_swp = sub.add_parser("sweep", help="verdict grid over ring families")
    p_swp.add_argument(
        "--family",
        action="append",
        required=True,
        help="family name (repeatable): DNh, DNd, ...",
    )
    p_swp.add_argument("--n", default="2", help="ring sizes: 3, 2,4, or 2..6")
    p_swp.add_argument("--theta-start", type=float, default=0.05)
    p_swp.add_argument("--theta-stop", type=float, default=math.pi / 2)
    p_swp.add_argument("--grid-step", type=float, default=0.005)
    p_swp.add_argument("--kp", type=int, default=0, choices=(0, 2))
    p_swp.add_argument("--lambda-n", type=float, default=1.0)
    p_swp.add_argument("--jobs", type=int, default=None)
    p_swp.add_argument("--format", choices=("csv", "json"), default="csv")
    p_swp.add_argument("--out", default=None, help="output path (default stdout)")
    p_swp.set_defaults(func=cmd_sweep)

    p_dia = sub.add_parser(
        "diagram", help="energy-momentum diagram (SVG + CSV)"
    )
    p_dia.add_argument("--pairs", type=int, choices=(2, 3), required=True)
    p_dia.add_argument(
        "--out", default=None, help="SVG path; CSV lands next to it"
    )
    p_dia.set_defaults(func=cmd_diagram)

    p_thr = sub.add_parser(
        "thresholds", help="recompute every tabulated critical latitude"
    )
    p_thr.add_argument("--grid-step", type=float, default=0.005)
    p_thr.add_argument("--tol", type=float, default=1e-6)
    p_thr.add_argument("--format", choices=("csv", "json"), default="csv")
    p_thr.add_argument("--out", default=None, help="output path (default stdout)")
    p_thr.set_defaults(func=cmd_thresholds)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.error("a command is required")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
