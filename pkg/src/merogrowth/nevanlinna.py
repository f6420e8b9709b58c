"""Nevanlinna functionals m, N, Nbar, T and deficiency over radius grids.

The proximity integral is a mean over the circle computed by a doubling
trapezoidal rule (for periodic integrands the trapezoid rule on equispaced
samples *is* the natural spectral rule); refinement stops once successive
doublings agree to 1e-6 relative.  Counting functions are exact sums over
declared singularity lists, which are cross-checked by contour counts
before first use on any disk.

T = m + N at every record by construction.  The deficiency at infinity is
estimated as the minimum of m/T over the top decade of the grid; this is a
finite-radius proxy and is reported together with the radius span it came
from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateCharacteristicError,
    PoleOnCircleError,
    QuadratureStallError,
)
from .functions import MeroFn, reciprocal

QUAD_REL_TOL = 1e-6
QUAD_ABS_FLOOR = 1e-9
QUAD_START = 64
QUAD_CAP = 2**20


def circle_mean(
    g: Callable[[np.ndarray], np.ndarray],
    *,
    rel_tol: float = QUAD_REL_TOL,
    abs_floor: float = QUAD_ABS_FLOOR,
    start: int = QUAD_START,
    cap: int = QUAD_CAP,
) -> tuple[float, int]:
    """Mean of g over [0, 2pi) by trapezoid doubling; returns (value, samples)."""
    n = start
    theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    total = float(np.sum(g(theta)))
    mean = total / n
    while n < cap:
        mid = theta + math.pi / n
        total += float(np.sum(g(mid)))
        theta = np.concatenate([theta, mid])
        n *= 2
        new_mean = total / n
        if abs(new_mean - mean) <= max(rel_tol * abs(new_mean), abs_floor):
            return new_mean, n
        mean = new_mean
    raise QuadratureStallError(
        f"circle quadrature did not converge within {cap} samples"
    )


def proximity(f: MeroFn, r: float) -> tuple[float, int]:
    """m(r, f): circle mean of log+|f|.  Returns (value, samples used)."""
    _require_clear_circle(f, r)

    def integrand(theta: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * theta)
        return np.maximum(f.log_abs(z), 0.0)

    value, n = circle_mean(integrand)
    return max(value, 0.0), n


def _require_clear_circle(f: MeroFn, r: float) -> None:
    if r <= 0:
        raise ValueError("radius must be positive")
    guard = f.pole_guard
    for c, _ in f.poles_in(f.working_radius):
        if abs(abs(c) - r) < guard:
            raise PoleOnCircleError(
                f"{f.name}: pole at {c:.6g} within guard of circle r = {r:.6g}"
            )


def counting(f: MeroFn, r: float, distinct: bool = False) -> float:
    """N(r, f) (or Nbar with ``distinct``), from the validated pole list."""
    if r <= 0:
        raise ValueError("radius must be positive")
    f.ensure_pole_list_validated(r)
    guard = f.pole_guard
    total = 0.0
    origin = 0
    for c, m in f.poles_in(r):
        w = 1 if distinct else m
        if abs(c) <= guard:
            origin += w
        else:
            total += w * math.log(r / abs(c))
    return total + origin * math.log(r)


class ProfileRecord(NamedTuple):
    r: float
    m: float
    N: float
    Nbar: float
    T: float
    samples: int


@dataclass(frozen=True)
class RadiusGrid:
    """Strictly increasing positive radii."""

    radii: tuple[float, ...]

    def __post_init__(self):
        rs = tuple(float(r) for r in self.radii)
        if not rs:
            raise ValueError("grid must contain at least one radius")
        if rs[0] <= 0 or any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("radii must be strictly increasing and positive")
        object.__setattr__(self, "radii", rs)

    @classmethod
    def logspace(cls, r_min: float, r_max: float, count: int) -> "RadiusGrid":
        return cls(tuple(np.geomspace(r_min, r_max, count)))

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    @property
    def r_min(self) -> float:
        return self.radii[0]

    def decades(self) -> float:
        return math.log10(self.r_max / self.r_min)

    def top_decade(self) -> tuple[float, ...]:
        cut = self.r_max / 10.0
        return tuple(r for r in self.radii if r >= cut)

    def __iter__(self):
        return iter(self.radii)

    def __len__(self):
        return len(self.radii)


@dataclass
class NevanlinnaProfile:
    """Per-radius records of (m, N, Nbar, T) for one function."""

    function_id: str
    records: list[ProfileRecord] = field(default_factory=list)

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(rec.r for rec in self.records)

    def record_at(self, r: float) -> ProfileRecord:
        for rec in self.records:
            if rec.r == r:
                return rec
        raise KeyError(f"no record at r = {r!r}")

    def T_of(self, r: float) -> float:
        return self.record_at(r).T

    def interp_T(self, r: float) -> float:
        """T at r by linear interpolation in (log r, T); clamps at the ends."""
        rs = np.array(self.radii)
        Ts = np.array([rec.T for rec in self.records])
        return float(np.interp(math.log(r), np.log(rs), Ts))

    def to_csv(self, path) -> None:
        lines = ["# schema=1", f"# function={self.function_id}", "r,m,N,Nbar,T,samples"]
        for rec in self.records:
            lines.append(
                f"{rec.r:.17g},{rec.m:.17g},{rec.N:.17g},{rec.Nbar:.17g},"
                f"{rec.T:.17g},{rec.samples}"
            )
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def characteristic(f: MeroFn, grid: RadiusGrid) -> NevanlinnaProfile:
    """Profile of m, N, Nbar, T = m + N over the grid."""
    prof = NevanlinnaProfile(function_id=f.name)
    for r in grid:
        m, n_samples = proximity(f, r)
        N = counting(f, r, distinct=False)
        Nbar = counting(f, r, distinct=True)
        prof.records.append(ProfileRecord(r, m, N, Nbar, m + N, n_samples))
    return prof


def reciprocal_characteristic(f: MeroFn, grid: RadiusGrid) -> NevanlinnaProfile:
    """Profile of 1/f (rational kind only); zeros of f become the poles."""
    f.ensure_zero_list_validated(grid.r_max)
    return characteristic(reciprocal(f), grid)


def coefficient_envelope(
    coeffs: Sequence[MeroFn], grid: RadiusGrid
) -> NevanlinnaProfile:
    """Pointwise max of T across the coefficient profiles.

    Each record is copied whole from the coefficient attaining the max, so
    T = m + N still holds record-wise.
    """
    if not coeffs:
        raise ValueError("need at least one coefficient")
    profiles = [characteristic(f, grid) for f in coeffs]
    out = NevanlinnaProfile(
        function_id="max(" + ",".join(f.name for f in coeffs) + ")"
    )
    for i in range(len(grid)):
        best = max(range(len(profiles)), key=lambda k: profiles[k].records[i].T)
        out.records.append(profiles[best].records[i])
    return out


class DeficiencyEstimate(NamedTuple):
    value: float
    r_lo: float
    r_hi: float
    n_radii: int


def estimate_deficiency(f: MeroFn, grid: RadiusGrid) -> DeficiencyEstimate:
    """Finite-radius proxy for the deficiency at infinity.

    Minimum of m/T over the top decade of the grid.  The true deficiency is
    a liminf as r grows; the returned record carries the radius span so
    reports can label the estimate honestly.
    """
    if grid.decades() < 2.0 - 1e-12:
        raise ValueError("grid must span at least two decades")
    top = grid.top_decade()
    ratios = []
    for r in top:
        m, _ = proximity(f, r)
        T = m + counting(f, r)
        if T <= 1e-9:
            raise DegenerateCharacteristicError(
                f"{f.name}: T({r:.4g}) is numerically zero; deficiency undefined"
            )
        ratios.append(min(m / T, 1.0))
    return DeficiencyEstimate(min(ratios), top[0], top[-1], len(top))


def deficiency_at_infinity(f: MeroFn, grid: RadiusGrid) -> float:
    return estimate_deficiency(f, grid).value
