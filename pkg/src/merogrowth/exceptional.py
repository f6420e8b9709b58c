"""Exclusion disks around zeros, radial exceptional sets, logarithmic density.

The minimum-modulus machinery needs small disks around the zeros of an
entire function outside of which log|f| admits the lower bound
-H(eta) log M(2eR, f).  Existence is classical; the concrete radius
allocation here is multiplicity-proportional within the total budget
4*eta*R, with Cartan's largest-circle recursion as an automatic fallback,
and :func:`verify_levin` as the empirical arbiter for either construction.

For the radial story, disks are built per annulus
Lambda_j = {alpha^j <= |z| <= alpha^(j+3/2)}, alpha = 2e, with per-annulus
budget 4*eta*(2e*alpha^j) (the annulus inner radius acting as the scale of
the radius at which the disks are invoked there).  Radial projection and
interval merging produce the exceptional set of radii, measured by
(1/log r) * integral over E(r) of dt/t.  Moduli below alpha are exempt:
the exceptional set lives in [1, infinity) and annulus indexing starts at
j = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundDomainError, NotNormalizedError
from .functions import MeroFn, max_log_modulus

ALPHA = 2.0 * math.e
LEVIN_MARGIN = -1e-9

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

ZeroList = Sequence[tuple[complex, int]]


@dataclass(frozen=True)
class DiskUnion:
    """Disks (center, radius) with a recorded total-radius budget."""

    disks: tuple[tuple[complex, float], ...]
    budget: float

    def __post_init__(self):
        ds = tuple((complex(c), float(r)) for c, r in self.disks)
        object.__setattr__(self, "disks", ds)
        total = self.total_radius
        if total > self.budget * (1.0 + 1e-12) + 1e-300:
            raise ValueError(
                f"disk radii sum {total:.6g} exceeds budget {self.budget:.6g}"
            )

    @property
    def total_radius(self) -> float:
        return float(sum(r for _, r in self.disks))

    def contains(self, z: complex) -> bool:
        return any(abs(z - c) < r for c, r in self.disks)

    def to_json_dict(self) -> dict:
        return {
            "budget": self.budget,
            "total_radius": self.total_radius,
            "disks": [
                {"center": [c.real, c.imag], "radius": r} for c, r in self.disks
            ],
        }


def build_exclusion_disks(zeros: ZeroList, R: float, eta: float) -> DiskUnion:
    """Multiplicity-proportional disks at the distinct zeros, total 4*eta*R."""
    if not (0.0 < eta <= 1.5 * math.e):
        raise BoundDomainError(f"eta = {eta:.6g} outside (0, 3e/2]")
    if R <= 0:
        raise ValueError("R must be positive")
    zs = [(complex(c), int(m)) for c, m in zeros]
    for c, _ in zs:
        if abs(c) > 2.0 * math.e * R * (1.0 + 1e-12):
            raise BoundDomainError(
                f"zero at {c:.6g} outside |z| <= 2eR = {2 * math.e * R:.6g}"
            )
    budget = 4.0 * eta * R
    if not zs:
        return DiskUnion(disks=(), budget=budget)
    total_mult = sum(m for _, m in zs)
    disks = tuple((c, budget * m / total_mult) for c, m in zs)
    return DiskUnion(disks=disks, budget=budget)


def cartan_disks(zeros: ZeroList, budget: float) -> DiskUnion:
    """Largest-circle recursion with centers restricted to the zeros.

    Stage radii p * unit with unit = (budget/2)/n; kept disks get twice the
    stage radius, so the radii sum stays within the budget.
    """
    pts: list[complex] = []
    for c, m in zeros:
        pts.extend([complex(c)] * int(m))
    if not pts:
        return DiskUnion(disks=(), budget=budget)
    n = len(pts)
    unit = (budget / 2.0) / n
    centers = sorted(set(pts), key=lambda w: (w.real, w.imag))
    remaining = list(pts)
    out: list[tuple[complex, float]] = []
    while remaining:
        placed = False
        for p in range(len(remaining), 0, -1):
            for c in centers:
                close = [w for w in remaining if abs(w - c) <= p * unit]
                if len(close) >= p:
                    out.append((c, 2.0 * p * unit))
                    kept = []
                    removed = 0
                    for w in remaining:
                        if removed < p and abs(w - c) <= p * unit:
                            removed += 1
                        else:
                            kept.append(w)
                    remaining = kept
                    placed = True
                    break
            if placed:
                break
        if not placed:  # every remaining point isolated: unit disks
            c = remaining.pop(0)
            out.append((c, 2.0 * unit))
    return DiskUnion(disks=tuple(out), budget=budget)


class LevinReport(NamedTuple):
    passed: bool
    min_margin: float
    H_value: float
    log_max_modulus: float
    samples_used: int
    samples_requested: int
    method: str


def disk_samples(R: float, count: int) -> np.ndarray:
    """Deterministic sunflower points filling |z| <= R."""
    k = np.arange(count, dtype=float)
    radii = R * np.sqrt((k + 0.5) / count)
    angles = k * _GOLDEN_ANGLE
    return radii * np.exp(1j * angles)


def verify_levin(
    f: MeroFn,
    R: float,
    eta: float,
    disks: DiskUnion,
    samples: int = 10**5,
    method: str = "proportional",
) -> LevinReport:
    """Check log|f| > -H(eta) log M(2eR, f) off the disks, by sampling.

    f must be entire with f(0) = 1 and an exhaustive zero list inside 2eR.
    The strict inequality is verified with margin >= -1e-9 to absorb
    floating error (f == 1 degenerates to margin exactly 0).
    """
    from .bounds import H  # deferred: bounds imports this module

    if not f.is_entire():
        raise ValueError(f"{f.name}: lower-bound check needs an entire function")
    f0 = complex(f._eval_array(0j))
    if abs(f0 - 1.0) > 1e-10:
        raise NotNormalizedError(
            f"{f.name}: f(0) = {f0:.6g}, normalize to f(0) = 1 first"
        )
    f.ensure_zero_list_validated(2.0 * math.e * R)
    h = H(eta)
    log_m, _ = max_log_modulus(f, 2.0 * math.e * R)
    pts = disk_samples(R, samples)
    if disks.disks:
        centers = np.array([c for c, _ in disks.disks])
        radii = np.array([r for _, r in disks.disks])
        dist = np.abs(pts[:, None] - centers[None, :])
        outside = np.all(dist >= radii[None, :], axis=1)
        pts = pts[outside]
    if pts.size == 0:
        return LevinReport(False, -math.inf, h, log_m, 0, samples, method)
    with np.errstate(divide="ignore"):
        margins = f.log_abs(pts) + h * log_m
    worst = float(np.min(margins))
    return LevinReport(worst >= LEVIN_MARGIN, worst, h, log_m, int(pts.size), samples, method)


def verified_exclusion_disks(
    f: MeroFn,
    R: float,
    eta: float,
    samples: int = 10**4,
) -> tuple[DiskUnion, LevinReport]:
    """Proportional disks checked by verify_levin, Cartan fallback on failure."""
    zeros = f.zeros_in(2.0 * math.e * R)
    disks = build_exclusion_disks(zeros, R, eta)
    report = verify_levin(f, R, eta, disks, samples, method="proportional")
    if report.passed:
        return disks, report
    fallback = cartan_disks(zeros, 4.0 * eta * R)
    report2 = verify_levin(f, R, eta, fallback, samples, method="cartan")
    return fallback, report2


@dataclass(frozen=True)
class RadialExceptionalSet:
    """Disjoint radial intervals in [1, infinity), with annulus bookkeeping."""

    intervals: tuple[tuple[float, float], ...]
    alpha: float = ALPHA
    annulus_range: tuple[int, int] | None = None

    def __post_init__(self):
        iv = _merge_intervals(self.intervals)
        object.__setattr__(self, "intervals", iv)
        if self.annulus_range is None and iv:
            object.__setattr__(
                self, "annulus_range", _annulus_span(iv, self.alpha)
            )

    def contains(self, t: float) -> bool:
        return any(lo <= t <= hi for lo, hi in self.intervals)

    def log_measure(self, r: float) -> float:
        """Integral of dt/t over the set clipped to [1, r)."""
        total = 0.0
        for lo, hi in self.intervals:
            a = max(lo, 1.0)
            b = min(hi, r)
            if b > a:
                total += math.log(b / a)
        return total

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "annulus_range": list(self.annulus_range) if self.annulus_range else None,
            "intervals": [[lo, hi] for lo, hi in self.intervals],
        }


def _merge_intervals(
    intervals: Sequence[tuple[float, float]]
) -> tuple[tuple[float, float], ...]:
    iv = sorted(
        (max(1.0, float(lo)), float(hi)) for lo, hi in intervals if hi > 1.0
    )
    iv = [(lo, hi) for lo, hi in iv if hi > lo]
    out: list[tuple[float, float]] = []
    for lo, hi in iv:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


def _annulus_span(
    intervals: Sequence[tuple[float, float]], alpha: float
) -> tuple[int, int]:
    la = math.log(alpha)
    j_lo, j_hi = None, None
    for lo, hi in intervals:
        # Lambda_j = [alpha^j, alpha^(j+3/2)] meets [lo, hi] iff
        # j <= log(hi)/log(alpha) and j + 3/2 >= log(lo)/log(alpha)
        a = max(1, math.ceil(math.log(max(lo, 1.0)) / la - 1.5))
        b = math.floor(math.log(hi) / la)
        if b >= 1 and b >= a:
            j_lo = a if j_lo is None else min(j_lo, a)
            j_hi = b if j_hi is None else max(j_hi, b)
    if j_lo is None:
        return (1, 0)
    return (j_lo, j_hi)


def radial_projection(disks: DiskUnion, alpha: float = ALPHA) -> RadialExceptionalSet:
    """Each disk (c, rho) covers radii [|c| - rho, |c| + rho]; merge and clip."""
    intervals = [(abs(c) - r, abs(c) + r) for c, r in disks.disks]
    return RadialExceptionalSet(intervals=tuple(intervals), alpha=alpha)


def log_density(eset: RadialExceptionalSet, r: float) -> float:
    if r <= 1.0:
        raise ValueError("log density needs r > 1")
    return eset.log_measure(r) / math.log(r)


def density_ceiling(eta: float) -> float:
    """16 eta e^(5/2) / (1 + log 2)."""
    if eta <= 0:
        raise BoundDomainError("eta must be positive")
    return 16.0 * eta * math.e ** 2.5 / (1.0 + math.log(2.0))


def assign_zeros_to_annuli(
    zeros: ZeroList, alpha: float = ALPHA
) -> dict[int, list[tuple[complex, int]]]:
    """Group zeros by the annuli Lambda_j containing them (overlaps allowed).

    Moduli below alpha are exempt from exceptional bookkeeping and do not
    appear in the result.
    """
    out: dict[int, list[tuple[complex, int]]] = {}
    la = math.log(alpha)
    for c, m in zeros:
        a = abs(complex(c))
        if a < alpha:
            continue
        x = math.log(a) / la
        j_hi = math.floor(x)
        j_lo = max(1, math.ceil(x - 1.5))
        for j in range(j_lo, j_hi + 1):
            out.setdefault(j, []).append((complex(c), int(m)))
    return dict(sorted(out.items()))


def build_annular_disks(
    zeros: ZeroList, eta: float, alpha: float = ALPHA
) -> DiskUnion:
    """Per-annulus proportional disks, budget 4*eta*(2e*alpha^j) for Lambda_j."""
    if not (0.0 < eta <= 1.5 * math.e):
        raise BoundDomainError(f"eta = {eta:.6g} outside (0, 3e/2]")
    groups = assign_zeros_to_annuli(zeros, alpha)
    disks: list[tuple[complex, float]] = []
    total_budget = 0.0
    for j, members in groups.items():
        budget_j = 4.0 * eta * (2.0 * math.e * alpha**j)
        total_budget += budget_j
        mult = sum(m for _, m in members)
        for c, m in members:
            disks.append((c, budget_j * m / mult))
    return DiskUnion(disks=tuple(disks), budget=total_budget)


class DensityRecord(NamedTuple):
    r: float
    density: float
    ceiling: float
    ok: bool


@dataclass
class DensityReport:
    eta: float
    alpha: float
    records: list[DensityRecord] = field(default_factory=list)
    eset: RadialExceptionalSet | None = None

    @property
    def passed(self) -> bool:
        return all(rec.ok for rec in self.records)

    def to_csv(self, path) -> None:
        lines = ["# schema=1", "r,density,ceiling"]
        for rec in self.records:
            lines.append(f"{rec.r:.17g},{rec.density:.17g},{rec.ceiling:.17g}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    def to_json_dict(self) -> dict:
        return {
            "eta": self.eta,
            "alpha": self.alpha,
            "ceiling": density_ceiling(self.eta),
            "passed": self.passed,
            "exceptional_set": self.eset.to_json_dict() if self.eset else None,
            "records": [
                {"r": rec.r, "density": rec.density, "ok": rec.ok}
                for rec in self.records
            ],
        }


def verify_density_lemma(
    zeros: ZeroList,
    eta: float,
    r_grid: Sequence[float],
    alpha: float = ALPHA,
    slack: float = 1e-6,
) -> DensityReport:
    """Annular disks -> projection -> density <= ceiling at every grid r."""
    disks = build_annular_disks(zeros, eta, alpha)
    eset = radial_projection(disks, alpha)
    ceiling = density_ceiling(eta)
    report = DensityReport(eta=eta, alpha=alpha, eset=eset)
    for r in r_grid:
        if r <= 1.0:
            raise ValueError("density grid radii must exceed 1")
        d = log_density(eset, r)
        report.records.append(
            DensityRecord(float(r), d, ceiling, d <= ceiling * (1.0 + slack))
        )
    return report


def save_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
