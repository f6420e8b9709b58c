"""Explicit growth-bound formulas and their certification against measurements.

Everything here evaluates closed-form right-hand sides: the eta-dependent
constant H, the coefficient log-bounds off exclusion disks, the master
constant D, the path bound K1 * exp((2*pi+1) D r), the density right-hand
side, the Bank-Laine comparison bound, and the characteristic-sum bound.
Certification integrates the companion system along an admissible path and
compares in log space (the linear values overflow immediately for realistic
coefficient growth; every formula therefore carries a log twin, and
certificates store logs).

B of the quotient decomposition is not effectively computable from the
existence proof; it is measured as the grid maximum of T(r, f_j)/T(Cr, f)
and inflated by 1.1, with the raw and inflated values both reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import (
    BoundDomainError,
    DegenerateCoefficientsError,
    EtaTooLargeError,
    NoAdmissiblePathError,
    NotDecomposableError,
    StepCollapseError,
    ZeroDataUnavailableError,
)
from .exceptional import DiskUnion, build_exclusion_disks
from .functions import EntireSum, MeroFn, Polynomial
from .nevanlinna import RadiusGrid, characteristic, counting, proximity
from .paths import (
    CompanionSystem,
    PathOmega,
    StateVector,
    integrate_along,
    select_admissible_path,
)

ETA_MAX = 1.5 * math.e
DENSITY_ETA_THRESHOLD = (1.0 + math.log(2.0)) / (16.0 * math.e**2.5)
B_SAFETY = 1.1
LOG_OVERFLOW = 709.0


def H(eta: float) -> float:
    """2 + log(3e/(2 eta)) on (0, 3e/2]."""
    if not (0.0 < eta <= ETA_MAX):
        raise BoundDomainError(f"eta = {eta!r} outside (0, 3e/2]")
    return 2.0 + math.log(3.0 * math.e / (2.0 * eta))


def enlargement_factor(R: float, r: float) -> float:
    """(R + 2er)/(R - 2er); 1 in the R = infinity limit."""
    if math.isinf(R):
        return 1.0
    if R <= 2.0 * math.e * r:
        raise BoundDomainError(
            f"R = {R:.6g} must exceed 2er = {2 * math.e * r:.6g}"
        )
    return (R + 2.0 * math.e * r) / (R - 2.0 * math.e * r)


@dataclass(frozen=True)
class BoundContext:
    """All symbols the bound formulas consume, bundled and validated."""

    n: int
    q_nu: tuple[int, ...]
    eta: float
    B: float
    C: float
    R: float
    r: float
    rho: float
    K1: float
    T_of: Callable[[float], float]

    def __post_init__(self):
        if self.n < 1 or len(self.q_nu) != self.n:
            raise ValueError("need one q_nu per coefficient")
        if any(q < 0 for q in self.q_nu):
            raise ValueError("q_nu entries must be nonnegative")
        H(self.eta)  # domain check
        # the growth lemma needs B > 1, but the reference evaluations pin
        # B = 1 exactly, so equality is admitted
        if self.B < 1.0:
            raise BoundDomainError("B must be at least 1")
        if self.C <= 1.0:
            raise BoundDomainError("C must exceed 1")
        if not (0.0 < self.rho <= self.r):
            raise BoundDomainError("need 0 < rho <= r")
        if not math.isinf(self.R) and self.R <= self.r:
            raise BoundDomainError("need r < R")
        if self.K1 < 0:
            raise BoundDomainError("K1 must be nonnegative")

    @property
    def q(self) -> int:
        return max(self.q_nu)

    @property
    def H_value(self) -> float:
        return H(self.eta)

    @property
    def factor(self) -> float:
        return enlargement_factor(self.R, self.r)

    def effective_R(self, cap: float | None = None) -> float:
        if not math.isinf(self.R):
            return self.R
        if cap is None:
            raise BoundDomainError(
                "R is the infinity sentinel; supply a finite cap for R-dependent terms"
            )
        return cap


@dataclass(frozen=True)
class MilesDecomposition:
    """Entire quotient f1/f2 of a coefficient, with measured growth constant."""

    f1: MeroFn
    f2: MeroFn
    measured_B: float
    raw_B: float
    C: float
    q_nu: int


def miles_decompose(f: MeroFn, C: float, grid: RadiusGrid) -> MilesDecomposition:
    """Split f into entire f1/f2 and measure B = max T(r, f_j)/T(Cr, f).

    Rational and quotient kinds split along their stored numerator and
    denominator; f2 is normalized to f2(0) = 1 unless the denominator
    vanishes at the origin, in which case the origin order q_nu is recorded
    and no normalization is applied.  Entire f decomposes trivially with
    B = 1 (characteristic monotonicity).
    """
    if C <= 1.0:
        raise BoundDomainError("C must exceed 1")
    wr = f.working_radius
    if f.is_entire():
        f1 = MeroFn(f.num, working_radius=wr, name=f.name + ".f1")
        f2 = MeroFn(Polynomial([1.0]), working_radius=wr, name=f.name + ".f2")
        return MilesDecomposition(f1=f1, f2=f2, measured_B=1.0, raw_B=1.0, C=C, q_nu=0)
    num, den = f.num, f.den
    if den.is_constant():
        raise NotDecomposableError(f"{f.name}: no quotient data to decompose")
    q_nu = den.root_order_at(0j)
    if q_nu == 0:
        d0 = complex(den(0j))
        scale = 1.0 / d0
        den_scaled = den * scale
        num_scaled = num * scale
    else:
        den_scaled = den
        num_scaled = num
    f1 = MeroFn(num_scaled, working_radius=wr, name=f.name + ".f1")
    f2 = MeroFn(den_scaled, working_radius=wr, name=f.name + ".f2")

    raw = 0.0
    used = 0
    for r in grid:
        if C * r > wr:
            break
        mC, _ = proximity(f, C * r)
        TC = mC + counting(f, C * r)
        if TC <= 1e-9:
            continue
        for part in (f1, f2):
            mp, _ = proximity(part, r)
            raw = max(raw, mp / TC)
        used += 1
    if used == 0:
        raw = 1.0
    measured = max(raw, 1.0) * B_SAFETY if used else 1.0
    return MilesDecomposition(
        f1=f1, f2=f2, measured_B=measured, raw_B=raw, C=C, q_nu=q_nu
    )


def context_B(decs: Sequence[MilesDecomposition]) -> float:
    """The B > 1 to drive the formulas with: max inflated measurement, floored."""
    vals = [d.measured_B for d in decs] or [1.0]
    return max(B_SAFETY, max(vals))


def coeff_log_bound_regular(
    ctx: BoundContext, dec: MilesDecomposition | None = None
) -> float:
    """B(1 + H) ((R+2er)/(R-2er)) T(CR): log|f_nu| bound, no origin pole."""
    if dec is not None and dec.q_nu != 0:
        raise BoundDomainError(
            "decomposition has a denominator zero at the origin; "
            "use coeff_log_bound_origin_pole"
        )
    return ctx.B * (1.0 + ctx.H_value) * ctx.factor * ctx.T_of(_cr(ctx))


def _cr(ctx: BoundContext) -> float:
    """Radius C*R at which the envelope is read (finite R required)."""
    if math.isinf(ctx.R):
        raise BoundDomainError(
            "R is the infinity sentinel; coefficient bounds need a finite R"
        )
    return ctx.C * ctx.R


def coeff_log_bound_origin_pole(
    ctx: BoundContext, q_nu: int, dec: MilesDecomposition | None = None
) -> float:
    """Regular bound plus q_nu log[R^(H (R+2er)/(R-2er)) / r]."""
    if q_nu < 0:
        raise ValueError("q_nu must be nonnegative")
    if dec is not None and dec.q_nu != q_nu:
        raise ValueError("q_nu disagrees with the decomposition's recorded order")
    base = ctx.B * (1.0 + ctx.H_value) * ctx.factor * ctx.T_of(_cr(ctx))
    if q_nu == 0:
        return base
    extra = q_nu * (
        ctx.H_value * ctx.factor * math.log(ctx.effective_R()) - math.log(ctx.r)
    )
    return base + extra


class DValue(NamedTuple):
    log: float
    linear: float  # inf when exp(log) overflows

    @classmethod
    def from_log(cls, lg: float) -> "DValue":
        return cls(lg, math.exp(lg) if lg < LOG_OVERFLOW else math.inf)


def D_constant(ctx: BoundContext) -> DValue:
    """n {1 + (R^(H fac)/r)^q exp[B(1+H) fac T(CR)]}, log-space primary.

    With X the exponent of the second summand, log D = log n + log(1 + e^X),
    evaluated stably on both sides of X = 0.
    """
    X = ctx.B * (1.0 + ctx.H_value) * ctx.factor * ctx.T_of(_cr(ctx))
    if ctx.q > 0:
        X += ctx.q * (
            ctx.H_value * ctx.factor * math.log(ctx.effective_R()) - math.log(ctx.r)
        )
    if X >= 0:
        lg = math.log(ctx.n) + X + math.log1p(math.exp(-X))
    else:
        lg = math.log(ctx.n) + math.log1p(math.exp(X))
    return DValue.from_log(lg)


@dataclass
class Certificate:
    """One certified comparison of measured path growth against the bound."""

    equation: str
    status: str  # PASS | FAIL | INCONCLUSIVE
    eta: float
    B: float
    C: float
    R: float
    r: float
    rho: float
    theta0: float
    K1: float
    q_nu: tuple[int, ...]
    D_log: float
    measured_log: float  # log of max ||F|| along the path
    bound_log: float  # log of K1 exp((2pi+1) D r); inf when D overflows it
    exclusion_budget_feasible: bool
    perturbed_r_from: float | None = None
    steps: int = 0
    note: str = ""

    @property
    def log_tightness(self) -> float:
        return self.measured_log - self.bound_log

    def to_json_dict(self) -> dict:
        lt = self.log_tightness
        return {
            "equation": self.equation,
            "status": self.status,
            "inputs": {
                "eta": self.eta,
                "B": self.B,
                "C": self.C,
                "R": self.R if not math.isinf(self.R) else "inf",
                "r": self.r,
                "rho": self.rho,
                "theta0": self.theta0,
                "K1": self.K1,
                "q_nu": list(self.q_nu),
            },
            "origin_pole_branch": any(q > 0 for q in self.q_nu),
            "D_log": self.D_log,
            "measured_log_max_norm": self.measured_log,
            "bound_log": self.bound_log if math.isfinite(self.bound_log) else "inf",
            "log_tightness": lt if math.isfinite(lt) else None,
            "tightness": math.exp(lt) if lt < 0 and math.isfinite(lt) else (
                None if not math.isfinite(lt) else math.exp(min(lt, LOG_OVERFLOW))
            ),
            "exclusion_budget_feasible": self.exclusion_budget_feasible,
            "perturbed_r_from": self.perturbed_r_from,
            "steps": self.steps,
            "note": self.note,
        }


def certify_theorem_main(
    sys: CompanionSystem,
    path: PathOmega,
    F0: StateVector,
    ctx: BoundContext,
    tol: float = 1e-8,
    equation: str = "",
    exclusion_budget_feasible: bool = True,
    perturbed_r_from: float | None = None,
    trajectory_sink: list | None = None,
) -> Certificate:
    """Integrate along the path and compare max ||F|| to K1 e^((2pi+1) D r).

    ``trajectory_sink``, when given, receives the integrated trajectory so
    callers can emit it without a second integration.
    """
    if abs(ctx.r - path.r) > 1e-9 * ctx.r or abs(ctx.rho - path.rho) > 1e-9 * ctx.rho:
        raise ValueError("context (rho, r) must match the path")
    if abs(ctx.K1 - F0.norm) > 1e-9 * max(ctx.K1, 1.0):
        raise ValueError("ctx.K1 must equal the initial state norm")
    D = D_constant(ctx)
    exponent_log = math.log(2.0 * math.pi + 1.0) + D.log + math.log(ctx.r)
    if exponent_log < LOG_OVERFLOW:
        bound_log = math.log(ctx.K1) + (2.0 * math.pi + 1.0) * math.exp(D.log) * ctx.r
    else:
        bound_log = math.inf
    common = dict(
        equation=equation,
        eta=ctx.eta,
        B=ctx.B,
        C=ctx.C,
        R=ctx.R,
        r=ctx.r,
        rho=ctx.rho,
        theta0=path.theta0,
        K1=ctx.K1,
        q_nu=ctx.q_nu,
        D_log=D.log,
        exclusion_budget_feasible=exclusion_budget_feasible,
        perturbed_r_from=perturbed_r_from,
    )
    try:
        traj = integrate_along(sys, path, F0, tol=tol)
    except StepCollapseError as exc:
        return Certificate(
            status="INCONCLUSIVE",
            measured_log=math.nan,
            bound_log=bound_log,
            steps=0,
            note=f"step collapse: {exc}",
            **common,
        )
    if trajectory_sink is not None:
        trajectory_sink.append(traj)
    measured_log = float(np.max(np.log(np.maximum(traj.norms, 1e-300))))
    ok = measured_log <= bound_log + math.log1p(10.0 * tol)
    return Certificate(
        status="PASS" if ok else "FAIL",
        measured_log=measured_log,
        bound_log=bound_log,
        steps=len(traj.points),
        **common,
    )


def find_path_for_certify(
    sys: CompanionSystem,
    rho: float,
    r: float,
    eta: float,
    R: float,
    y_poles: Sequence[tuple[complex, int]] = (),
    max_perturbations: int = 6,
) -> tuple[PathOmega, DiskUnion, bool, float | None]:
    """Admissible path honoring the full exclusion budget where possible.

    Three-stage fallback: full-budget disks around the solution's poles at
    the requested r; the same disks at radii r * 1.05^k (the exceptional-set
    escape the theorem itself allows); finally a guard-only path flagged as
    not honoring the budget (the inequality certified there is the stronger,
    disk-free statement).  Returns (path, disks, budget_feasible,
    original r if perturbed else None).
    """
    inside = [(c, m) for c, m in y_poles if abs(c) <= 2.0 * math.e * R]
    disks = build_exclusion_disks(inside, R, eta)
    for k in range(max_perturbations + 1):
        r_try = r * (1.05**k)
        try:
            path = select_admissible_path(sys, rho, r_try, disks.disks)
            return path, disks, True, (r if k else None)
        except NoAdmissiblePathError:
            continue
    for k in range(max_perturbations + 1):
        r_try = r * (1.05**k)
        try:
            path = select_admissible_path(sys, rho, r_try, ())
            return path, disks, False, (r if k else None)
        except NoAdmissiblePathError:
            continue
    raise NoAdmissiblePathError(
        f"no admissible path at r = {r:.6g} even guard-only, "
        f"after {max_perturbations} radius perturbations"
    )


def density_bound_rhs(ctx: BoundContext, r: float, eps: float) -> float:
    """5B(1+H) T(3 e^2 r) + [(5H - 1) q + 1 + eps] log r, with C = e, R = 3er."""
    if not (0.0 < ctx.eta < DENSITY_ETA_THRESHOLD):
        raise EtaTooLargeError(
            f"eta = {ctx.eta:.8g} not below the density threshold "
            f"{DENSITY_ETA_THRESHOLD:.8g} (strict)"
        )
    if eps <= 0:
        raise BoundDomainError("eps must be positive")
    h = ctx.H_value
    T_val = ctx.T_of(3.0 * math.e**2 * r)
    return 5.0 * ctx.B * (1.0 + h) * T_val + (
        (5.0 * h - 1.0) * ctx.q + 1.0 + eps
    ) * math.log(r)


class DensityCheckRecord(NamedTuple):
    r: float
    log_m: tuple[float, ...]  # per derivative order j = 0 .. n-1
    rhs: float
    exceptional: bool
    ok: bool


@dataclass
class DensityCheckReport:
    equation: str
    eta: float
    eps: float
    records: list[DensityCheckRecord] = field(default_factory=list)
    r_eps: float | None = None

    @property
    def passed(self) -> bool:
        return all(rec.ok for rec in self.records if not rec.exceptional)

    def compute_r_eps(self) -> float | None:
        """Smallest grid radius from which on no non-exceptional violation occurs."""
        viol = [rec.r for rec in self.records if not rec.exceptional and not rec.ok]
        if not viol:
            self.r_eps = self.records[0].r if self.records else None
        else:
            later = [rec.r for rec in self.records if rec.r > max(viol)]
            self.r_eps = min(later) if later else None
        return self.r_eps

    def to_csv(self, path) -> None:
        nmax = max((len(rec.log_m) for rec in self.records), default=0)
        cols = ["r"] + [f"log_m_y{j}" for j in range(nmax)] + [
            "rhs",
            "exceptional",
            "ok",
        ]
        lines = ["# schema=1", ",".join(cols)]
        for rec in self.records:
            row = [f"{rec.r:.17g}"]
            row += [f"{v:.17g}" for v in rec.log_m]
            row += ["" for _ in range(nmax - len(rec.log_m))]
            row.append(f"{rec.rhs:.17g}")
            row.append("1" if rec.exceptional else "0")
            row.append("PASS" if rec.ok else "FAIL")
            lines.append(",".join(row))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    def to_json_dict(self) -> dict:
        return {
            "equation": self.equation,
            "eta": self.eta,
            "eps": self.eps,
            "passed": self.passed,
            "r_eps": self.r_eps,
            "violations": [
                rec.r for rec in self.records if not rec.exceptional and not rec.ok
            ],
        }


def certify_density(
    y: MeroFn,
    grid: RadiusGrid,
    ctx: BoundContext,
    eps: float,
    exceptional_contains: Callable[[float], bool] | None = None,
    equation: str = "",
    map_fn: Callable = map,
) -> DensityCheckReport:
    """Per-radius check of log m(r, y^(j)) <= density RHS, j = 0 .. n-1.

    Radii inside the exceptional radial set are marked and exempt from the
    aggregate verdict.  m <= 0 makes the left side -inf, which passes.
    ``map_fn`` lets a caller fan the radius sweep out to an executor; record
    order follows the grid either way.
    """
    report = DensityCheckReport(equation=equation, eta=ctx.eta, eps=eps)
    derivatives = [y]
    for _ in range(ctx.n - 1):
        derivatives.append(derivatives[-1].derivative())

    def one_radius(r: float) -> DensityCheckRecord:
        rhs = density_bound_rhs(ctx, r, eps)
        logs = []
        for yj in derivatives:
            m, _ = proximity(yj, r)
            logs.append(math.log(m) if m > 1e-300 else -math.inf)
        exc = bool(exceptional_contains(r)) if exceptional_contains else False
        ok = all(v <= rhs for v in logs)
        return DensityCheckRecord(r, tuple(logs), rhs, exc, ok)

    report.records.extend(map_fn(one_radius, grid))
    report.compute_r_eps()
    return report


def bank_laine_rhs_log(
    y: MeroFn,
    sigma: float,
    c: float,
    c1: float,
    Phi: Callable[[float], float],
    r: float,
) -> float:
    """log of c { r N(sigma r, y) + r^2 exp(c1 J log(r J)) }, J = Nbar(sigma r, 1/y) + Phi(sigma r).

    Needs the zero list of y for the distinct-zero count; zero-free y gives
    J = Phi.
    """
    if sigma <= 1.0:
        raise BoundDomainError("sigma must exceed 1")
    if c <= 0 or c1 <= 0:
        raise BoundDomainError("c and c1 must be positive")
    if r <= 1.0:
        raise BoundDomainError("comparison radius must exceed 1")
    sr = sigma * r
    if not y.zeros_known:
        raise ZeroDataUnavailableError(
            f"{y.name}: Nbar(r, 1/y) needs the zero list of y"
        )
    y.ensure_zero_list_validated(sr)
    N_poles = counting(y, sr)
    guard = y.pole_guard
    Nbar_zeros = 0.0
    origin = 0
    for z0, _m in y.zeros_in(sr):
        if abs(z0) <= guard:
            origin += 1
        else:
            Nbar_zeros += math.log(sr / abs(z0))
    Nbar_zeros += origin * math.log(sr)
    J = Nbar_zeros + Phi(sr)
    term2_log = 2.0 * math.log(r) + c1 * J * math.log(max(r * J, 1.0 + 1e-12))
    if N_poles > 0:
        term1_log = math.log(r) + math.log(N_poles)
        hi = max(term1_log, term2_log)
        lo = min(term1_log, term2_log)
        total = hi + math.log1p(math.exp(lo - hi))
    else:
        total = term2_log
    return math.log(c) + total


def bank_laine_rhs(
    y: MeroFn,
    sigma: float,
    c: float,
    c1: float,
    Phi: Callable[[float], float],
    r: float,
) -> float:
    lg = bank_laine_rhs_log(y, sigma, c, c1, Phi, r)
    return math.exp(lg) if lg < LOG_OVERFLOW else math.inf


def theorem15_rhs(
    coeff_T_sum: Callable[[float], float], sigma: float, r: float
) -> float:
    """(sum T(r, f_nu)) [(log r) log(sum T)]^sigma; NaN when the bracket <= 0.

    The bracket is negative for sum T < 1, where the asymptotic display is
    vacuous; callers render NaN as a blank column.
    """
    if sigma <= 1.0:
        raise BoundDomainError("sigma must exceed 1")
    S = coeff_T_sum(r)
    if S <= 0 or r <= 1.0:
        return math.nan
    bracket = math.log(r) * math.log(S)
    if bracket <= 0:
        return math.nan
    return S * bracket**sigma


def check_coeff_T_not_constant(
    coeff_T_sum: Callable[[float], float], r_lo: float, r_hi: float
) -> None:
    if abs(coeff_T_sum(r_hi) - coeff_T_sum(r_lo)) < 1e-9:
        raise DegenerateCoefficientsError(
            "coefficient characteristics are constant on the grid"
        )


def deficiency_T_bound_log(ctx: BoundContext, delta: float, eps: float) -> float:
    """log of ((2 pi + 1) R D / (delta - eps))."""
    if not (0.0 < eps < delta <= 1.0):
        raise BoundDomainError("need 0 < eps < delta <= 1")
    D = D_constant(ctx)
    return (
        math.log(2.0 * math.pi + 1.0)
        + math.log(ctx.effective_R())
        + D.log
        - math.log(delta - eps)
    )


def deficiency_T_bound(ctx: BoundContext, delta: float, eps: float) -> float:
    lg = deficiency_T_bound_log(ctx, delta, eps)
    return math.exp(lg) if lg < LOG_OVERFLOW else math.inf


def envelope_T_exact(coeffs: Sequence[MeroFn]) -> Callable[[float], float]:
    """max_nu T(s, f_nu) as an exact per-call evaluation (no grid interpolation)."""

    def T_of(s: float) -> float:
        best = 0.0
        for f in coeffs:
            m, _ = proximity(f, s)
            best = max(best, m + counting(f, s))
        return best

    return T_of
