"""Experiment configuration: TOML parsing, serialization, and run manifests.

Configs round-trip losslessly through ``config_to_toml`` / ``parse_config``.
Complex numbers are written as two-element [re, im] arrays.  The emitter is
local because no TOML writer is available in the environment; it covers
exactly the subset the config schema uses (tables, arrays of tables,
strings, numbers, booleans, inline arrays).
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .catalog import CASE_BUILDERS, DEFAULT_WORKING_RADIUS, EquationCase, load_case
from .errors import ConfigError
from .functions import EntireSum, MeroFn, Polynomial, REGISTRY_NAMES
from .nevanlinna import RadiusGrid

_ENTIRE_BASE: dict[str, Any] = {
    "one": lambda: EntireSum.poly(Polynomial([1.0])),
    "z": lambda: EntireSum.poly(Polynomial([0.0, 1.0])),
    "z_squared": lambda: EntireSum.poly(Polynomial([0.0, 0.0, 1.0])),
    "exp": lambda: EntireSum.exponential(1.0),
    "sin": lambda: EntireSum.sin(1.0),
    "cos": lambda: EntireSum.cos(1.0),
}

COEFF_KINDS = ("rational", "named", "product", "quotient")


def _as_complex(v: Any, where: str) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        try:
            return complex(float(v[0]), float(v[1]))
        except (TypeError, ValueError):
            pass
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    raise ConfigError(f"{where}: expected [re, im] pair, got {v!r}")


def _complex_list(v: Any, where: str) -> tuple[complex, ...]:
    if not isinstance(v, (list, tuple)) or not v:
        raise ConfigError(f"{where}: expected nonempty list of [re, im] pairs")
    return tuple(_as_complex(x, f"{where}[{i}]") for i, x in enumerate(v))


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


@dataclass(frozen=True)
class CoeffSpec:
    """Tagged coefficient expression, one of COEFF_KINDS."""

    kind: str
    name: str = ""  # named / product
    num: tuple[complex, ...] = ()  # rational / product
    den: tuple[complex, ...] = ()  # rational / product / quotient
    terms: tuple[tuple[complex, tuple[complex, ...]], ...] = ()  # quotient: (b, poly)

    def __post_init__(self):
        if self.kind not in COEFF_KINDS:
            raise ConfigError(f"coefficient kind {self.kind!r} not one of {COEFF_KINDS}")
        if self.kind == "named" and self.name not in REGISTRY_NAMES:
            raise ConfigError(
                f"coefficient name {self.name!r} not in registry {sorted(REGISTRY_NAMES)}"
            )
        if self.kind == "product" and self.name not in _ENTIRE_BASE:
            raise ConfigError(
                f"product factor {self.name!r} not an entire registry name "
                f"{sorted(_ENTIRE_BASE)}"
            )

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind}
        if self.name:
            d["name"] = self.name
        if self.num:
            d["num"] = [_pair(c) for c in self.num]
        if self.den:
            d["den"] = [_pair(c) for c in self.den]
        if self.terms:
            d["terms"] = [
                {"b": _pair(b), "poly": [_pair(c) for c in poly]}
                for b, poly in self.terms
            ]
        return d

    @classmethod
    def from_dict(cls, d: dict, where: str) -> "CoeffSpec":
        kind = d.get("kind")
        if not isinstance(kind, str):
            raise ConfigError(f"{where}.kind: required string")
        name = d.get("name", "")
        num = _complex_list(d["num"], f"{where}.num") if "num" in d else ()
        den = _complex_list(d["den"], f"{where}.den") if "den" in d else ()
        terms: tuple = ()
        if "terms" in d:
            raw = d["terms"]
            if not isinstance(raw, list) or not raw:
                raise ConfigError(f"{where}.terms: expected nonempty list of tables")
            acc = []
            for i, t in enumerate(raw):
                b = _as_complex(t.get("b", [0.0, 0.0]), f"{where}.terms[{i}].b")
                poly = _complex_list(t.get("poly"), f"{where}.terms[{i}].poly")
                acc.append((b, poly))
            terms = tuple(acc)
        if kind == "rational" and not num:
            raise ConfigError(f"{where}: rational coefficient needs num")
        if kind == "quotient" and not terms:
            raise ConfigError(f"{where}: quotient coefficient needs terms")
        if kind == "product" and not num:
            raise ConfigError(f"{where}: product coefficient needs num")
        return cls(kind=kind, name=name, num=num, den=den, terms=terms)

    def build(self, working_radius: float, label: str) -> MeroFn:
        den_poly = Polynomial(list(self.den)) if self.den else None
        if self.kind == "rational":
            return MeroFn(
                Polynomial(list(self.num)),
                den_poly,
                working_radius=working_radius,
                name=label,
            )
        if self.kind == "named":
            from .functions import named_function

            return named_function(self.name, working_radius)
        if self.kind == "product":
            num = _ENTIRE_BASE[self.name]() * Polynomial(list(self.num))
            return MeroFn(num, den_poly, working_radius=working_radius, name=label)
        num = EntireSum(
            tuple((Polynomial(list(poly)), b) for b, poly in self.terms)
        )
        return MeroFn(num, den_poly, working_radius=working_radius, name=label)


@dataclass(frozen=True)
class EquationSpec:
    name: str
    corpus: str = ""
    order: int = 0
    coefficients: tuple[CoeffSpec, ...] = ()

    def __post_init__(self):
        if self.corpus:
            if self.corpus not in CASE_BUILDERS:
                raise ConfigError(
                    f"equation.corpus {self.corpus!r} unknown; have {sorted(CASE_BUILDERS)}"
                )
        else:
            if self.order < 1:
                raise ConfigError("equation.order must be >= 1 for custom equations")
            if len(self.coefficients) != self.order:
                raise ConfigError(
                    f"equation: {self.order} coefficients required, "
                    f"got {len(self.coefficients)}"
                )


@dataclass(frozen=True)
class InitialSpec:
    rho: float
    theta0: float = 0.0
    state: tuple[complex, ...] = ()

    def __post_init__(self):
        if not (self.rho > 0):
            raise ConfigError("initial.rho must be positive")
        if not math.isfinite(self.theta0):
            raise ConfigError("initial.theta0 must be finite")


@dataclass(frozen=True)
class ParameterSpec:
    etas: tuple[float, ...] = (0.1,)
    C: float = math.e
    R_mode: str = "3er"
    R: float = 0.0  # 0 means: use R_mode
    eps: float = 0.1
    sigma: float = 1.5
    c: float = 1.0
    c1: float = 1.0

    def __post_init__(self):
        if not self.etas:
            raise ConfigError("parameters.eta must list at least one value")
        if any(not (e > 0) for e in self.etas):
            raise ConfigError("parameters.eta values must be positive")
        if self.C <= 1.0:
            raise ConfigError("parameters.C must exceed 1")
        if self.R_mode not in ("3er", "fixed"):
            raise ConfigError("parameters.R_mode must be '3er' or 'fixed'")
        if self.R_mode == "fixed" and not (self.R > 0):
            raise ConfigError("parameters.R must be positive when R_mode='fixed'")

    def R_for(self, r: float) -> float:
        return 3.0 * math.e * r if self.R_mode == "3er" else self.R


@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if self.points < 1:
            raise ConfigError("grid.points must be >= 1 (empty grid)")
        if not (0 < self.r_min <= self.r_max):
            raise ConfigError("grid needs 0 < min <= max")
        if self.spacing not in ("log", "linear"):
            raise ConfigError("grid.spacing must be 'log' or 'linear'")
        if self.points == 1 and self.r_min != self.r_max:
            raise ConfigError("grid with one point needs min == max")

    def build(self) -> RadiusGrid:
        import numpy as np

        if self.points == 1:
            return RadiusGrid((self.r_min,))
        if self.spacing == "log":
            return RadiusGrid.logspace(self.r_min, self.r_max, self.points)
        return RadiusGrid(tuple(np.linspace(self.r_min, self.r_max, self.points)))


@dataclass(frozen=True)
class ExperimentConfig:
    equation: EquationSpec
    initial: InitialSpec
    parameters: ParameterSpec = ParameterSpec()
    grid: GridSpec = GridSpec(1.0, 5.0, 3)
    ode_tol: float = 1e-8
    output_dir: str = "out"

    def to_dict(self) -> dict:
        eq: dict[str, Any] = {"name": self.equation.name}
        if self.equation.corpus:
            eq["corpus"] = self.equation.corpus
        if self.equation.order:
            eq["order"] = self.equation.order
        if self.equation.coefficients:
            eq["coefficient"] = [c.to_dict() for c in self.equation.coefficients]
        init: dict[str, Any] = {
            "rho": self.initial.rho,
            "theta0": self.initial.theta0,
        }
        if self.initial.state:
            init["state"] = [_pair(c) for c in self.initial.state]
        par = {
            "eta": list(self.parameters.etas),
            "C": self.parameters.C,
            "R_mode": self.parameters.R_mode,
            "eps": self.parameters.eps,
            "sigma": self.parameters.sigma,
            "c": self.parameters.c,
            "c1": self.parameters.c1,
        }
        if self.parameters.R_mode == "fixed":
            par["R"] = self.parameters.R
        return {
            "equation": eq,
            "initial": init,
            "parameters": par,
            "grid": {
                "min": self.grid.r_min,
                "max": self.grid.r_max,
                "points": self.grid.points,
                "spacing": self.grid.spacing,
            },
            "tolerances": {"ode": self.ode_tol},
            "output": {"dir": self.output_dir},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a table")
        eq_d = data.get("equation")
        if not isinstance(eq_d, dict):
            raise ConfigError("equation: required table")
        coeffs = tuple(
            CoeffSpec.from_dict(c, f"equation.coefficient[{i}]")
            for i, c in enumerate(eq_d.get("coefficient", []))
        )
        corpus = eq_d.get("corpus", "")
        equation = EquationSpec(
            name=str(eq_d.get("name", corpus or "custom")),
            corpus=str(corpus),
            order=int(eq_d.get("order", len(coeffs))),
            coefficients=coeffs,
        )
        init_d = data.get("initial")
        if not isinstance(init_d, dict) or "rho" not in init_d:
            raise ConfigError("initial.rho: required")
        state = (
            _complex_list(init_d["state"], "initial.state")
            if "state" in init_d
            else ()
        )
        initial = InitialSpec(
            rho=float(init_d["rho"]),
            theta0=float(init_d.get("theta0", 0.0)),
            state=state,
        )
        par_d = data.get("parameters", {})
        if not isinstance(par_d, dict):
            raise ConfigError("parameters: must be a table")
        etas_raw = par_d.get("eta", [0.1])
        if isinstance(etas_raw, (int, float)):
            etas_raw = [etas_raw]
        if not isinstance(etas_raw, list):
            raise ConfigError("parameters.eta: number or list of numbers")
        parameters = ParameterSpec(
            etas=tuple(float(e) for e in etas_raw),
            C=float(par_d.get("C", math.e)),
            R_mode=str(par_d.get("R_mode", "fixed" if "R" in par_d else "3er")),
            R=float(par_d.get("R", 0.0)),
            eps=float(par_d.get("eps", 0.1)),
            sigma=float(par_d.get("sigma", 1.5)),
            c=float(par_d.get("c", 1.0)),
            c1=float(par_d.get("c1", 1.0)),
        )
        grid_d = data.get("grid")
        if not isinstance(grid_d, dict):
            raise ConfigError("grid: required table")
        try:
            grid = GridSpec(
                r_min=float(grid_d["min"]),
                r_max=float(grid_d["max"]),
                points=int(grid_d["points"]),
                spacing=str(grid_d.get("spacing", "log")),
            )
        except KeyError as exc:
            raise ConfigError(f"grid.{exc.args[0]}: required") from None
        tol_d = data.get("tolerances", {})
        out_d = data.get("output", {})
        return cls(
            equation=equation,
            initial=initial,
            parameters=parameters,
            grid=grid,
            ode_tol=float(tol_d.get("ode", 1e-8)),
            output_dir=str(out_d.get("dir", "out")),
        )


def parse_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: TOML syntax error: {exc}") from exc
    return ExperimentConfig.from_dict(data)


# --- minimal TOML emitter (schema subset only) ---


def _toml_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            raise ConfigError("cannot serialize non-finite number to TOML")
        s = repr(v)
        return s if ("." in s or "e" in s or "E" in s) else s + ".0"
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        inner = ", ".join(f"{k} = {_toml_value(x)}" for k, x in v.items())
        return "{" + inner + "}"
    raise ConfigError(f"cannot serialize {type(v).__name__} to TOML")


def _emit_table(name: str, table: dict, out: list[str]) -> None:
    array_keys = [
        k
        for k, v in table.items()
        if isinstance(v, list) and v and all(isinstance(x, dict) for x in v)
    ]
    out.append(f"[{name}]")
    for k, v in table.items():
        if k in array_keys or isinstance(v, dict):
            continue
        out.append(f"{k} = {_toml_value(v)}")
    out.append("")
    for k in array_keys:
        for row in table[k]:
            out.append(f"[[{name}.{k}]]")
            for rk, rv in row.items():
                out.append(f"{rk} = {_toml_value(rv)}")
            out.append("")


def config_to_toml(cfg: ExperimentConfig) -> str:
    data = cfg.to_dict()
    out: list[str] = []
    for section in ("equation", "initial", "parameters", "grid", "tolerances", "output"):
        _emit_table(section, data[section], out)
    return "\n".join(out).rstrip() + "\n"


def canonical_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def build_case(cfg: ExperimentConfig, working_radius: float = DEFAULT_WORKING_RADIUS):
    """EquationCase for the config: catalog-backed or built from coefficients."""
    if cfg.equation.corpus:
        return load_case(cfg.equation.corpus, working_radius)
    coeffs = tuple(
        spec.build(working_radius, f"{cfg.equation.name}.f{i}")
        for i, spec in enumerate(cfg.equation.coefficients)
    )
    return EquationCase(
        name=cfg.equation.name,
        description="user-defined equation",
        coefficients=coeffs,
        solutions=(),
    )


@dataclass
class RunManifest:
    command: str
    config_hash: str
    version: str
    seed: int = 0
    tasks: list[dict] = field(default_factory=list)
    files: list[str] = field(default_factory=list)
    root: str | None = None

    def add_task(self, name: str, status: str) -> None:
        self.tasks.append({"name": name, "status": status})

    def add_file(self, path: str | Path) -> None:
        self.files.append(str(path))

    def validate(self) -> None:
        for f in self.files:
            p = Path(f)
            if not p.exists() or p.stat().st_size == 0:
                raise ConfigError(f"manifest lists missing or empty output {f}")

    def _file_names(self) -> list[str]:
        # Emitted relative to the output root so reruns into different
        # directories stay byte-identical.
        names = []
        for f in self.files:
            p = Path(f)
            if self.root is not None:
                try:
                    p = p.relative_to(self.root)
                except ValueError:
                    pass
            names.append(str(p))
        return sorted(names)

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "version": self.version,
            "seed": self.seed,
            "tasks": self.tasks,
            "files": self._file_names(),
        }

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
