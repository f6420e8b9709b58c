"""Path construction and companion-system integration with growth envelopes.

The path runs radially from rho*e^{i theta0} out to r*e^{i theta0}, then once
around the full circle of radius r; its length is (r - rho) + 2*pi*r, at most
(2*pi + 1)*r.  The scalar equation y^(n) + sum f_nu y^(nu) = 0 is integrated
in first-order companion form F' = A(z) F along the arc-length
parametrization with an embedded Dormand-Prince 5(4) pair.  Step acceptance
uses error-per-unit-length so the accumulated drift over the whole path stays
within a small multiple of the requested tolerance.

Two envelopes accompany every trajectory: the sharp one,
||F0|| * exp(integral of ||A|| over the path), and the coarse one that
replaces the integral by the path maximum of sum(|f_nu| + 1) times
(2*pi + 1)*r.  Norms are the component sums ||F|| = sum |y^(j)| and
||A|| = sum |a_ij| throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import (
    NoAdmissiblePathError,
    PoleProximityError,
    StepCollapseError,
    ToleranceUnmetError,
)
from .functions import MeroFn, eval_at

PATH_CLEARANCE_REL = 1e-3
THETA_GRID_SIZE = 64
FORCED_MARKS = 256
MIN_STEP_REL = 1e-14
MAX_CONSECUTIVE_REJECTS = 64


@dataclass(frozen=True)
class PathOmega:
    """Radial segment then full circle, parametrized by arc length."""

    theta0: float
    rho: float
    r: float

    def __post_init__(self):
        if not (0.0 < self.rho <= self.r):
            raise ValueError("need 0 < rho <= r")

    @property
    def segment_length(self) -> float:
        return self.r - self.rho

    @property
    def length(self) -> float:
        return self.segment_length + 2.0 * math.pi * self.r

    @property
    def start(self) -> complex:
        return self.rho * complex(math.cos(self.theta0), math.sin(self.theta0))

    @property
    def end(self) -> complex:
        return self.r * complex(math.cos(self.theta0), math.sin(self.theta0))

    def point(self, s: float) -> complex:
        if s <= self.segment_length:
            tau = self.rho + s
            return tau * complex(math.cos(self.theta0), math.sin(self.theta0))
        theta = self.theta0 + (s - self.segment_length) / self.r
        return self.r * complex(math.cos(theta), math.sin(theta))

    def tangent(self, s: float, piece: int | None = None) -> complex:
        on_segment = s < self.segment_length if piece is None else piece == 0
        if on_segment:
            return complex(math.cos(self.theta0), math.sin(self.theta0))
        theta = self.theta0 + (s - self.segment_length) / self.r
        return 1j * complex(math.cos(theta), math.sin(theta))

    def marks(self, count: int = FORCED_MARKS) -> np.ndarray:
        """count equispaced arc-length marks plus both endpoints and the corner."""
        ms = np.linspace(0.0, self.length, count + 1)
        ms = np.union1d(ms, [self.segment_length])
        return ms


@dataclass(frozen=True)
class StateVector:
    components: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.components)
        if not cs:
            raise ValueError("state vector needs at least one component")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in cs):
            raise ValueError("state vector components must be finite")
        object.__setattr__(self, "components", cs)

    @property
    def norm(self) -> float:
        return float(sum(abs(c) for c in self.components))

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=complex)


@dataclass(frozen=True)
class CompanionSystem:
    """y^(n) + f_{n-1} y^(n-1) + ... + f_0 y = 0 in first-order form."""

    coefficients: tuple[MeroFn, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("system needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def coefficient_poles(self) -> list[tuple[complex, int]]:
        out: list[tuple[complex, int]] = []
        for f in self.coefficients:
            out.extend(f.poles_in(f.working_radius))
        return out

    def min_pole_clearance(self, path: PathOmega) -> float:
        """Distance from the nearest coefficient pole to the path."""
        best = math.inf
        for c, _ in self.coefficient_poles():
            best = min(best, _dist_to_path(c, path))
        return best

    def matrix_norm_at(self, z: complex) -> float:
        """||A(z)|| = sum |a_ij| = (n - 1) + sum |f_nu(z)|."""
        total = float(self.order - 1)
        for f in self.coefficients:
            total += abs(eval_at(f, z))
        return total


def companion_matrix(sys: CompanionSystem, z: complex) -> np.ndarray:
    n = sys.order
    A = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        A[j, j + 1] = 1.0
    for nu, f in enumerate(sys.coefficients):
        A[n - 1, nu] = -eval_at(f, z)
    return A


def _dist_to_segment(w: complex, a: complex, b: complex) -> float:
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(w - a)
    t = ((w - a) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(w - (a + t * d))


def _dist_to_path(w: complex, path: PathOmega) -> float:
    seg = _dist_to_segment(w, path.start, path.end)
    circ = abs(abs(w) - path.r)
    return min(seg, circ)


@dataclass
class TrajectoryPoint:
    s: float
    z: complex
    state: np.ndarray
    err: float

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.state)))


@dataclass
class Trajectory:
    path: PathOmega
    points: list[TrajectoryPoint] = field(default_factory=list)

    @property
    def s_values(self) -> np.ndarray:
        return np.array([p.s for p in self.points])

    @property
    def norms(self) -> np.ndarray:
        return np.array([p.norm for p in self.points])

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]

    def at_marks(self, marks: np.ndarray) -> list[TrajectoryPoint]:
        """Points whose arc length coincides with a requested mark."""
        out = []
        have = {round(p.s, 12): p for p in self.points}
        for m in marks:
            key = round(float(m), 12)
            if key in have:
                out.append(have[key])
        return out

    def to_csv(self, path_out, envelope: np.ndarray | None = None) -> None:
        n = len(self.points[0].state)
        cols = ["s", "re_z", "im_z"] + [f"abs_y{j}" for j in range(n)] + ["norm"]
        if envelope is not None:
            cols.append("envelope")
        lines = ["# schema=1", ",".join(cols)]
        for i, p in enumerate(self.points):
            row = [f"{p.s:.17g}", f"{p.z.real:.17g}", f"{p.z.imag:.17g}"]
            row += [f"{abs(c):.17g}" for c in p.state]
            row.append(f"{p.norm:.17g}")
            if envelope is not None:
                row.append(f"{envelope[i]:.17g}")
            lines.append(",".join(row))
        with open(path_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


def integrate_along(
    sys: CompanionSystem,
    path: PathOmega,
    F0: StateVector,
    tol: float = 1e-8,
) -> Trajectory:
    """Integrate F' = A(z(s)) F z'(s) in arc length along the path.

    Accepted steps are recorded; FORCED_MARKS equispaced marks (plus the
    segment/circle corner) are always landed on exactly.  Error control is
    per unit arc length, so the end-state drift stays near tol rather than
    tol times the step count.
    """
    n = sys.order
    if len(F0.components) != n:
        raise ValueError(f"state dimension {len(F0.components)} != order {n}")
    clearance = sys.min_pole_clearance(path)
    guard = max(f.pole_guard for f in sys.coefficients)
    if clearance <= guard:
        raise PoleProximityError(
            f"coefficient pole within {clearance:.3g} of the path (guard {guard:.3g})"
        )
    L = path.length
    coeffs = sys.coefficients

    def rhs(s: float, F: np.ndarray, piece: int) -> np.ndarray:
        z = path.point(s)
        w = path.tangent(s, piece)
        dF = np.empty(n, dtype=complex)
        if n > 1:
            dF[: n - 1] = F[1:]
        acc = 0j
        for nu in range(n):
            acc += complex(eval_at(coeffs[nu], z)) * F[nu]
        dF[n - 1] = -acc
        return dF * w

    traj = Trajectory(path=path)
    F = F0.as_array()
    s = 0.0
    traj.points.append(TrajectoryPoint(0.0, path.point(0.0), F.copy(), 0.0))

    targets = [float(t) for t in path.marks() if t > 0.0]
    h = min(L / 100.0, (targets[0] if targets else L))
    err_prev_ratio = 1.0
    k1: np.ndarray | None = None

    for target in targets:
        piece = 0 if target <= path.segment_length + 1e-15 * L else 1
        if k1 is None:
            k1 = rhs(s, F, piece)
        rejects = 0
        while s < target - 1e-15 * L:
            remaining = target - s
            if remaining < 1e-12 * L:
                s = target  # rounding sliver; a real step here only collapses
                break
            h = min(h, remaining)
            if h < MIN_STEP_REL * L:
                raise StepCollapseError(
                    f"step collapsed to {h:.3g} at s = {s:.6g} (near-pole passage?)"
                )
            ks = [k1]
            for i in range(1, 7):
                si = s + _DP_C[i] * h
                Fi = F.copy()
                for j, a in enumerate(_DP_A[i]):
                    if a != 0.0:
                        Fi = Fi + (h * a) * ks[j]
                ks.append(rhs(min(si, target), Fi, piece))
            F5 = F.copy()
            F4 = F.copy()
            for i in range(7):
                if _DP_B5[i] != 0.0:
                    F5 = F5 + (h * _DP_B5[i]) * ks[i]
                if _DP_B4[i] != 0.0:
                    F4 = F4 + (h * _DP_B4[i]) * ks[i]
            err = float(np.sum(np.abs(F5 - F4)))
            scale = max(float(np.sum(np.abs(F))), float(np.sum(np.abs(F5))), 1e-300)
            # the noise term keeps tiny forced steps acceptable: without it,
            # budgets below the double rounding floor reject every step
            budget = tol * (h / L) * scale + 64.0 * np.finfo(float).eps * scale
            ratio = err / budget if budget > 0 else math.inf
            if ratio <= 1.0:
                s = s + h
                if target - s < 1e-12 * L:
                    s = target  # absorb the floating sliver, or it forces a sub-guard step
                F = F5
                k1 = ks[6]  # FSAL
                traj.points.append(
                    TrajectoryPoint(s, path.point(s), F.copy(), err)
                )
                safe = max(ratio, 1e-12)
                grow = 0.9 * safe ** (-0.7 / 5.0) * err_prev_ratio ** (0.4 / 5.0)
                err_prev_ratio = max(ratio, 1e-10)
                h = h * min(5.0, max(0.2, grow))
                rejects = 0
            else:
                rejects += 1
                if rejects > MAX_CONSECUTIVE_REJECTS:
                    raise ToleranceUnmetError(
                        f"{rejects} consecutive rejections at s = {s:.6g}"
                    )
                h = h * min(1.0, max(0.1, 0.9 * ratio ** (-1.0 / 5.0)))
        # exact landing on the mark
        traj.points[-1].s = target
        traj.points[-1].z = path.point(target)
        k1 = None if piece == 0 and target >= path.segment_length else k1
    return traj


def gronwall_integral(sys: CompanionSystem, path: PathOmega) -> float:
    """Integral of ||A(z(t))|| |dt| along the whole path."""
    return float(cumulative_gronwall(sys, path, np.array([path.length]))[-1])


def cumulative_gronwall(
    sys: CompanionSystem, path: PathOmega, s_values: Sequence[float]
) -> np.ndarray:
    """Integral of ||A|| from 0 to each s in s_values (sorted ascending)."""
    svals = np.asarray(s_values, dtype=float)
    if np.any(np.diff(svals) < 0):
        raise ValueError("s_values must be sorted ascending")

    def g(s: float) -> float:
        return sys.matrix_norm_at(path.point(s))

    nodes = np.union1d(np.union1d(svals, [0.0, path.segment_length]), [])
    nodes = nodes[(nodes >= 0.0) & (nodes <= path.length)]
    acc = 0.0
    integral_at: dict[float, float] = {0.0: 0.0}
    for a, b in zip(nodes[:-1], nodes[1:]):
        if b > a:
            val, _ = quad(g, a, b, limit=200, epsabs=1e-12, epsrel=1e-10)
            acc += val
        integral_at[float(b)] = acc
    return np.array([integral_at[float(s)] for s in svals])


def gronwall_envelope_log(sys: CompanionSystem, path: PathOmega, F0: StateVector) -> float:
    """log of ||F0|| exp(integral ||A||): overflow-safe twin."""
    if F0.norm == 0.0:
        return -math.inf
    return math.log(F0.norm) + gronwall_integral(sys, path)


def gronwall_envelope(sys: CompanionSystem, path: PathOmega, F0: StateVector) -> float:
    lg = gronwall_envelope_log(sys, path, F0)
    return math.exp(lg) if lg < 709.0 else math.inf


def path_max_coefficient_sum(sys: CompanionSystem, path: PathOmega, samples: int = 4096) -> float:
    """max over the path of sum_nu (|f_nu(z)| + 1), by dense scan + refinement."""

    def g(s: float) -> float:
        z = path.point(s)
        return sum(abs(eval_at(f, z)) + 1.0 for f in sys.coefficients)

    ss = np.linspace(0.0, path.length, samples)
    vals = np.array([g(float(s)) for s in ss])
    k = int(np.argmax(vals))
    lo = ss[max(0, k - 1)]
    hi = ss[min(samples - 1, k + 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c1 = b - phi * (b - a)
    c2 = a + phi * (b - a)
    g1, g2 = g(c1), g(c2)
    for _ in range(60):
        if g1 < g2:
            a, c1, g1 = c1, c2, g2
            c2 = a + phi * (b - a)
            g2 = g(c2)
        else:
            b, c2, g2 = c2, c1, g1
            c1 = b - phi * (b - a)
            g1 = g(c1)
        if b - a < 1e-12 * max(1.0, path.length):
            break
    return max(float(vals[k]), g1, g2)


def coarse_envelope_log(sys: CompanionSystem, path: PathOmega, F0: StateVector) -> float:
    """log of K1 exp[(max_path sum(|f_nu|+1)) (2 pi + 1) r]."""
    if F0.norm == 0.0:
        return -math.inf
    m = path_max_coefficient_sum(sys, path)
    return math.log(F0.norm) + m * (2.0 * math.pi + 1.0) * path.r


def coarse_envelope(sys: CompanionSystem, path: PathOmega, F0: StateVector) -> float:
    lg = coarse_envelope_log(sys, path, F0)
    return math.exp(lg) if lg < 709.0 else math.inf


def select_admissible_path(
    sys: CompanionSystem,
    rho: float,
    r: float,
    exceptional_disks: Sequence[tuple[complex, float]] = (),
    clearance_rel: float = PATH_CLEARANCE_REL,
    n_angles: int = THETA_GRID_SIZE,
) -> PathOmega:
    """First admissible theta0 on the deterministic angle grid.

    Admissible means: every coefficient pole at least clearance_rel * r from
    the path, and the path meets none of the supplied exceptional disks.
    The circle part does not depend on theta0, so a pole or disk sitting on
    the circle |z| = r blocks every angle; the caller must perturb r then.
    """
    if not (0.0 < rho <= r):
        raise ValueError("need 0 < rho <= r")
    clearance = clearance_rel * r
    poles = sys.coefficient_poles()
    blocking: list[str] = []

    for c, _ in poles:
        if abs(abs(c) - r) < clearance:
            raise NoAdmissiblePathError(
                f"coefficient pole at {c:.6g} blocks the circle |z| = {r:.6g} "
                f"for every angle; perturb r",
                attempted_angles=(),
                blocking=(f"pole {c:.6g} on circle",),
            )
    for c, rad in exceptional_disks:
        if abs(abs(c) - r) <= rad:
            raise NoAdmissiblePathError(
                f"exceptional disk at {c:.6g} (radius {rad:.3g}) meets the "
                f"circle |z| = {r:.6g}; perturb r",
                attempted_angles=(),
                blocking=(f"disk {c:.6g} r={rad:.3g} on circle",),
            )

    angles = [2.0 * math.pi * k / n_angles for k in range(n_angles)]
    attempted = []
    for theta0 in angles:
        attempted.append(theta0)
        cand = PathOmega(theta0=theta0, rho=rho, r=r)
        ok = True
        for c, _ in poles:
            if _dist_to_segment(c, cand.start, cand.end) < clearance:
                ok = False
                blocking.append(f"theta0={theta0:.4f}: pole {c:.6g} near segment")
                break
        if ok:
            for c, rad in exceptional_disks:
                if _dist_to_segment(c, cand.start, cand.end) <= rad:
                    ok = False
                    blocking.append(f"theta0={theta0:.4f}: disk {c:.6g} on segment")
                    break
        if ok:
            return cand
    raise NoAdmissiblePathError(
        f"no admissible angle among {n_angles} candidates at r = {r:.6g}",
        attempted_angles=tuple(attempted),
        blocking=tuple(blocking),
    )
