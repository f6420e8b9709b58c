"""Command-line driver: config in, CSV/JSON artifacts out.

Subcommands map one-to-one onto the certification workflows: ``nevanlinna``
(growth profiles), ``certify`` (path-integral certificates over the
(r, eta) sweep), ``density`` (proximity bound off the exceptional radial
set), and ``compare`` (the three competing right-hand sides side by side).

Exit codes: 0 success, 1 numeric failure (unmet tolerance, no admissible
path, ...), 2 configuration or validation failure.  Sweep points run on a
thread pool; a single collector writes results in grid order, so output
bytes do not depend on --threads.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bounds import (
    BoundContext,
    DENSITY_ETA_THRESHOLD,
    H,
    bank_laine_rhs_log,
    certify_density,
    certify_theorem_main,
    check_coeff_T_not_constant,
    context_B,
    deficiency_T_bound_log,
    envelope_T_exact,
    find_path_for_certify,
    miles_decompose,
    theorem15_rhs,
)
from .catalog import DEFAULT_WORKING_RADIUS, EquationCase
from .config import (
    ExperimentConfig,
    RunManifest,
    build_case,
    canonical_hash,
    parse_config,
)
from .errors import (
    ConfigError,
    EtaTooLargeError,
    MerogrowthError,
    NoAdmissiblePathError,
)
from .exceptional import (
    ALPHA,
    RadialExceptionalSet,
    build_annular_disks,
    radial_projection,
    save_json,
)
from .functions import MeroFn
from .nevanlinna import (
    RadiusGrid,
    characteristic,
    coefficient_envelope,
    counting,
    estimate_deficiency,
    proximity,
)
from .paths import StateVector

LOG_OVERFLOW = 709.0
_MILES_GRID = RadiusGrid.logspace(2.0, 50.0, 8)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _lin_or_blank(lg: float) -> str:
    """Linear-space column for a log value; blank when exp would overflow."""
    if not math.isfinite(lg) or lg >= LOG_OVERFLOW:
        return ""
    return _fmt(math.exp(lg))


def _working_radius_for(cfg: ExperimentConfig) -> float:
    reach = 3.0 * math.e**2 * cfg.grid.r_max
    reach = max(reach, cfg.parameters.C * 3.0 * math.e * cfg.grid.r_max * 1.35)
    return max(DEFAULT_WORKING_RADIUS, 1.05 * reach)


def _case_for(cfg: ExperimentConfig) -> EquationCase:
    return build_case(cfg, working_radius=_working_radius_for(cfg))


def _solution_fn(case: EquationCase, what: str) -> MeroFn:
    sol = case.solutions[case.primary] if case.solutions else None
    if sol is None or sol.fn is None:
        raise ConfigError(
            f"{what} needs an equation with a closed-form solution "
            f"(use a corpus equation); {case.name!r} has none"
        )
    return sol.fn


def _decompositions(case: EquationCase, C: float):
    decs = [miles_decompose(f, C, _MILES_GRID) for f in case.coefficients]
    return decs, context_B(decs), tuple(d.q_nu for d in decs)


def _write_lines(path: Path, lines: Sequence[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- subcommands ---


def cmd_nevanlinna(
    cfg: ExperimentConfig, out_dir: Path, threads: int = 1
) -> RunManifest:
    case = _case_for(cfg)
    grid = cfg.grid.build()
    manifest = _new_manifest("nevanlinna", cfg)
    targets: list[tuple[str, MeroFn]] = [
        (f"f{i}_{f.name}", f) for i, f in enumerate(case.coefficients)
    ]
    for sol in case.solutions:
        if sol.fn is not None:
            targets.append((f"y_{sol.label}", sol.fn))

    def profile(item):
        label, fn = item
        return label, characteristic(fn, grid)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(profile, targets))
    for label, prof in results:
        out = out_dir / f"nevanlinna_{case.name}_{label}.csv"
        prof.to_csv(out)
        manifest.add_file(out)
        manifest.add_task(f"profile:{label}", "ok")
    env = coefficient_envelope(case.coefficients, grid)
    env_path = out_dir / f"nevanlinna_{case.name}_envelope.csv"
    env.to_csv(env_path)
    manifest.add_file(env_path)
    manifest.add_task("envelope", "ok")
    return manifest


def cmd_certify(
    cfg: ExperimentConfig, out_dir: Path, threads: int = 1, tol: float | None = None
) -> RunManifest:
    case = _case_for(cfg)
    sys_ = case.system()
    ode_tol = cfg.ode_tol if tol is None else tol
    manifest = _new_manifest("certify", cfg)
    sol = case.solutions[case.primary] if case.solutions else None
    if sol is None and len(cfg.initial.state) != case.order:
        raise ConfigError(
            f"initial.state must supply {case.order} values for a custom equation"
        )
    decs, B, q_nu = _decompositions(case, cfg.parameters.C)
    T_of = envelope_T_exact(case.coefficients)
    sweep = [
        (ri, ei, r, eta)
        for ri, r in enumerate(cfg.grid.build())
        for ei, eta in enumerate(cfg.parameters.etas)
    ]

    def one_point(item):
        ri, ei, r, eta = item
        R_budget = cfg.parameters.R_for(r)
        path, disks, feasible, perturbed = find_path_for_certify(
            sys_, cfg.initial.rho, r, eta, R_budget,
            sol.poles if sol is not None else (),
        )
        r_eff = path.r
        if sol is not None:
            F0 = StateVector(sol.exact_state(path.start))
        else:
            F0 = StateVector(cfg.initial.state)
        ctx = BoundContext(
            n=case.order, q_nu=q_nu, eta=eta, B=B, C=cfg.parameters.C,
            R=cfg.parameters.R_for(r_eff), r=r_eff, rho=path.rho,
            K1=F0.norm, T_of=T_of,
        )
        sink: list = []
        cert = certify_theorem_main(
            sys_, path, F0, ctx, tol=ode_tol, equation=case.name,
            exclusion_budget_feasible=feasible, perturbed_r_from=perturbed,
            trajectory_sink=sink,
        )
        return ri, ei, cert, (sink[0] if sink else None)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(one_point, sweep))

    certs = []
    summary = [
        "# schema=1",
        "r,eta,status,measured_log,bound_log,log_tightness,budget_feasible",
    ]
    for ri, ei, cert, traj in results:
        certs.append(cert.to_json_dict())
        lt = cert.log_tightness
        summary.append(
            ",".join(
                [
                    _fmt(cert.r),
                    _fmt(cert.eta),
                    cert.status,
                    _fmt(cert.measured_log) if math.isfinite(cert.measured_log) else "",
                    _fmt(cert.bound_log) if math.isfinite(cert.bound_log) else "inf",
                    _fmt(lt) if math.isfinite(lt) else "-inf",
                    "1" if cert.exclusion_budget_feasible else "0",
                ]
            )
        )
        if traj is not None:
            tpath = out_dir / f"certify_{case.name}_r{ri}_e{ei}.csv"
            traj.to_csv(tpath)
            manifest.add_file(tpath)
        manifest.add_task(f"certify:r{ri}:e{ei}", cert.status.lower())

    cert_path = out_dir / f"certificates_{case.name}.json"
    save_json({"equation": case.name, "certificates": certs}, cert_path)
    manifest.add_file(cert_path)
    sum_path = out_dir / f"certify_{case.name}_summary.csv"
    _write_lines(sum_path, summary)
    manifest.add_file(sum_path)
    return manifest


def _radial_set_from_decs(decs, eta: float, reach: float) -> RadialExceptionalSet:
    """Radial exceptional set induced by denominator zeros past the first annulus."""
    zeros: list[tuple[complex, int]] = []
    for d in decs:
        if d.f2.num.degree == 0:
            continue
        zeros.extend(d.f2.zeros_in(reach))
    disks = build_annular_disks(zeros, eta, ALPHA)
    return radial_projection(disks, ALPHA)


def cmd_density(
    cfg: ExperimentConfig, out_dir: Path, threads: int = 1
) -> RunManifest:
    eta = cfg.parameters.etas[0]
    if not (0.0 < eta < DENSITY_ETA_THRESHOLD):
        raise EtaTooLargeError(
            f"eta = {eta:.8g} must lie strictly below the density threshold "
            f"{DENSITY_ETA_THRESHOLD:.8g}"
        )
    case = _case_for(cfg)
    y = _solution_fn(case, "density certification")
    grid = cfg.grid.build()
    manifest = _new_manifest("density", cfg)
    decs, B, q_nu = _decompositions(case, math.e)
    T_of = envelope_T_exact(case.coefficients)
    r_ref = grid.r_max
    ctx = BoundContext(
        n=case.order, q_nu=q_nu, eta=eta, B=B, C=math.e,
        R=3.0 * math.e * r_ref, r=r_ref, rho=min(cfg.initial.rho, r_ref),
        K1=0.0, T_of=T_of,
    )
    eset = _radial_set_from_decs(decs, eta, 2.0 * math.e * r_ref)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        report = certify_density(
            y, grid, ctx, cfg.parameters.eps,
            exceptional_contains=eset.contains,
            equation=case.name,
            map_fn=pool.map,
        )
    csv_path = out_dir / f"density_{case.name}.csv"
    report.to_csv(csv_path)
    manifest.add_file(csv_path)
    summary = report.to_json_dict()
    summary["exceptional_set"] = eset.to_json_dict()
    summary["B"] = B
    summary["H"] = H(eta)
    json_path = out_dir / f"density_{case.name}_summary.json"
    save_json(summary, json_path)
    manifest.add_file(json_path)
    manifest.add_task("density", "pass" if report.passed else "fail")
    return manifest


def cmd_compare(
    cfg: ExperimentConfig, out_dir: Path, threads: int = 1
) -> RunManifest:
    par = cfg.parameters
    if par.sigma <= 1.0:
        raise ConfigError("parameters.sigma must exceed 1")
    case = _case_for(cfg)
    y = _solution_fn(case, "bound comparison")
    grid = cfg.grid.build()
    if grid.r_min <= 1.0:
        raise ConfigError("compare grid must start above r = 1")
    manifest = _new_manifest("compare", cfg)
    eta = par.etas[0]
    decs, B, q_nu = _decompositions(case, math.e)
    T_of = envelope_T_exact(case.coefficients)

    # measured deficiency of y at infinity over a grid reaching two decades
    dgrid = RadiusGrid.logspace(grid.r_max / 100.0, grid.r_max, 33)
    delta = estimate_deficiency(y, dgrid).value
    eps = par.eps
    note = ""
    if not (0.0 < eps < delta <= 1.0):
        eps = delta / 2.0
        note = f"eps clamped to delta/2 = {eps:.6g} (configured eps >= measured delta)"

    def T_sum(s: float) -> float:
        total = 0.0
        for f in case.coefficients:
            m, _ = proximity(f, s)
            total += m + counting(f, s)
        return total

    check_coeff_T_not_constant(T_sum, grid.r_min, grid.r_max)
    zero_free = not y.zeros_in(grid.r_max)

    def Phi(s: float) -> float:
        return max(math.log(s), T_of(s))

    def one_radius(r: float):
        m, _ = proximity(y, r)
        T_y = m + counting(y, r)
        ctx = BoundContext(
            n=case.order, q_nu=q_nu, eta=eta, B=B, C=math.e,
            R=3.0 * math.e * r, r=r, rho=min(cfg.initial.rho, r),
            K1=0.0, T_of=T_of,
        )
        new_log = deficiency_T_bound_log(ctx, delta, eps)
        bank_log = bank_laine_rhs_log(y, par.sigma, par.c, par.c1, Phi, r)
        t15 = theorem15_rhs(T_sum, par.sigma, r)
        t15_log = math.log(t15) if (t15 == t15 and t15 > 0) else math.nan
        return r, T_y, new_log, bank_log, t15_log

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(one_radius, grid))

    lines = [
        "# schema=1",
        f"# equation={case.name}",
        f"# eta={_fmt(eta)}",
        f"# B={_fmt(B)}",
        f"# H={_fmt(H(eta))}",
        f"# delta={_fmt(delta)}",
        f"# eps={_fmt(eps)}",
        f"# sigma={_fmt(par.sigma)}",
        f"# c={_fmt(par.c)}",
        f"# c1={_fmt(par.c1)}",
    ]
    if zero_free:
        lines.append("# note=J(r)=Phi(r) (y zero-free)")
    if note:
        lines.append(f"# note={note}")
    lines.append(
        "r,T_y,new_bound_log,new_bound,bank_laine_log,bank_laine,"
        "theorem15_log,theorem15"
    )
    for r, T_y, new_log, bank_log, t15_log in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r),
                    _fmt(T_y),
                    _fmt(new_log),
                    _lin_or_blank(new_log),
                    _fmt(bank_log),
                    _lin_or_blank(bank_log),
                    _fmt(t15_log) if math.isfinite(t15_log) else "",
                    _lin_or_blank(t15_log) if math.isfinite(t15_log) else "",
                ]
            )
        )
    out = out_dir / f"compare_{case.name}.csv"
    _write_lines(out, lines)
    manifest.add_file(out)
    manifest.add_task("compare", "ok")
    return manifest


# --- driver ---


def _new_manifest(command: str, cfg: ExperimentConfig, seed: int = 0) -> RunManifest:
    return RunManifest(
        command=command,
        config_hash=canonical_hash(cfg),
        version=__version__,
        seed=seed,
    )


_COMMANDS: dict[str, Callable] = {
    "nevanlinna": cmd_nevanlinna,
    "certify": cmd_certify,
    "density": cmd_density,
    "compare": cmd_compare,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="merogrowth",
        description="Growth certification for linear ODE solutions in the complex plane",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--tol", type=float, default=None, help="ODE tolerance override")
        p.add_argument("--threads", type=int, default=1, help="sweep worker threads")
        p.add_argument("--seed", type=int, default=0,
                       help="seed recorded for randomized property suites")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        out_dir = Path(args.out if args.out is not None else cfg.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "certify":
            manifest = cmd_certify(cfg, out_dir, threads=args.threads, tol=args.tol)
        else:
            manifest = _COMMANDS[args.command](cfg, out_dir, threads=args.threads)
        manifest.seed = args.seed
        manifest.root = str(out_dir)
        manifest.validate()
        mpath = out_dir / f"manifest_{args.command}_{cfg.equation.name}.json"
        manifest.write(mpath)
        statuses = [t["status"] for t in manifest.tasks]
        bad = [s for s in statuses if s not in ("ok", "pass")]
        print(f"{args.command}: {len(manifest.files)} files -> {out_dir}"
              f" ({len(statuses)} tasks{', ' + str(len(bad)) + ' failed' if bad else ''})")
        if bad:
            return 1
        return 0
    except (ConfigError, EtaTooLargeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoAdmissiblePathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.attempted_angles:
            angles = ", ".join(f"{a:.4f}" for a in exc.attempted_angles)
            print(f"attempted theta0 grid: [{angles}]", file=sys.stderr)
        if exc.blocking:
            print(f"blocking: {'; '.join(exc.blocking)}", file=sys.stderr)
        return 1
    except MerogrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
