"""Bundled linear ODEs with known closed-form solutions.

Each case packages the coefficient functions, the companion system, and the
exact solutions with their derivative stacks, so integration runs can be
checked against ground truth and certificates can be driven end to end.
The second-order comparison equation is built so that e^z/(z-1) solves it
exactly (coefficient derived by elimination and machine-verified).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

from .functions import EntireSum, MeroFn, Polynomial, named_function
from .paths import CompanionSystem, StateVector

DEFAULT_WORKING_RADIUS = 2000.0


@dataclass(frozen=True)
class SolutionSpec:
    """One closed-form solution with its first n-1 derivatives."""

    label: str
    exact_state: Callable[[complex], tuple[complex, ...]]
    fn: MeroFn | None = None  # meromorphic representation, when expressible
    poles: tuple[tuple[complex, int], ...] = ()


@dataclass(frozen=True)
class EquationCase:
    name: str
    description: str
    coefficients: tuple[MeroFn, ...]  # f_0 .. f_{n-1}
    solutions: tuple[SolutionSpec, ...]
    primary: int = 0

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def q_nu(self) -> tuple[int, ...]:
        out = []
        for f in self.coefficients:
            den = f.den
            out.append(den.root_order_at(0j) if den is not None else 0)
        return tuple(out)

    def system(self) -> CompanionSystem:
        return CompanionSystem(self.coefficients)

    def solution(self, label: str | None = None) -> SolutionSpec:
        if label is None:
            return self.solutions[self.primary]
        for s in self.solutions:
            if s.label == label:
                return s
        raise KeyError(f"{self.name}: no solution labelled {label!r}")

    def initial_state(self, z0: complex, label: str | None = None) -> StateVector:
        return StateVector(self.solution(label).exact_state(z0))


def _const(value: complex, name: str, wr: float) -> MeroFn:
    return MeroFn(Polynomial([value]), working_radius=wr, name=name, zeros=())


def exp_case(working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    """y' - y = 0, solved by e^z."""
    f0 = _const(-1.0, "neg-one", working_radius)
    sol = SolutionSpec(
        label="exp",
        exact_state=lambda z: (cmath.exp(z),),
        fn=named_function("exp", working_radius),
    )
    return EquationCase(
        name="exp",
        description="y' = y",
        coefficients=(f0,),
        solutions=(sol,),
    )


def harmonic_case(working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    """y'' + y = 0, solved by sin and cos."""
    f0 = _const(1.0, "one", working_radius)
    f1 = _const(0.0, "zero", working_radius)
    sin_sol = SolutionSpec(
        label="sin",
        exact_state=lambda z: (cmath.sin(z), cmath.cos(z)),
        fn=named_function("sin", working_radius),
    )
    cos_sol = SolutionSpec(
        label="cos",
        exact_state=lambda z: (cmath.cos(z), -cmath.sin(z)),
        fn=named_function("cos", working_radius),
    )
    return EquationCase(
        name="harmonic",
        description="y'' + y = 0",
        coefficients=(f0, f1),
        solutions=(sin_sol, cos_sol),
    )


def euler_case(working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    """z^2 y'' - 2z y' + 2y = 0, solved by z and z^2 (coefficients singular at 0)."""
    f0 = MeroFn(
        Polynomial([2.0]),
        Polynomial([0.0, 0.0, 1.0]),
        working_radius=working_radius,
        name="two-over-z-squared",
    )
    f1 = MeroFn(
        Polynomial([-2.0]),
        Polynomial([0.0, 1.0]),
        working_radius=working_radius,
        name="neg-two-over-z",
    )
    lin = SolutionSpec(
        label="z",
        exact_state=lambda z: (z, 1.0 + 0j),
        fn=named_function("z", working_radius),
    )
    quad = SolutionSpec(
        label="z_squared",
        exact_state=lambda z: (z * z, 2.0 * z),
        fn=named_function("z_squared", working_radius),
    )
    return EquationCase(
        name="euler",
        description="z^2 y'' - 2z y' + 2y = 0",
        coefficients=(f0, f1),
        solutions=(lin, quad),
        primary=1,
    )


def expq_case(working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    """y' = (1 - 1/(z-1)) y, solved by e^z/(z-1)."""
    f0 = MeroFn(
        Polynomial([2.0, -1.0]),
        Polynomial([-1.0, 1.0]),
        working_radius=working_radius,
        name="two-minus-z-over-z-minus-one",
    )
    sol = SolutionSpec(
        label="exp_over_zminus1",
        exact_state=lambda z: (cmath.exp(z) / (z - 1.0),),
        fn=named_function("exp_over_zminus1", working_radius),
        poles=((1.0 + 0j, 1),),
    )
    return EquationCase(
        name="expq",
        description="y' = (1 - 1/(z-1)) y",
        coefficients=(f0,),
        solutions=(sol,),
    )


def compare_case(working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    """y'' + e^z y' + f0 y = 0 built so that e^z/(z-1) is an exact solution.

    Elimination gives f0 = [-(z^2-4z+5) - e^z (z^2-3z+2)] / (z-1)^2; the
    residual y'' + e^z y' + f0 y vanishes identically (machine-checked).
    """
    num = EntireSum.poly(Polynomial([-5.0, 4.0, -1.0])) + EntireSum(
        ((Polynomial([-2.0, 3.0, -1.0]), 1.0 + 0j),)
    )
    f0 = MeroFn(
        num,
        Polynomial([1.0, -2.0, 1.0]),
        working_radius=working_radius,
        name="compare-f0",
    )
    f1 = MeroFn(
        EntireSum.exponential(1.0),
        working_radius=working_radius,
        name="exp",
        zeros=(),
    )

    def state(z: complex) -> tuple[complex, complex]:
        w = z - 1.0
        ez = cmath.exp(z)
        return (ez / w, ez * (z - 2.0) / (w * w))

    sol = SolutionSpec(
        label="exp_over_zminus1",
        exact_state=state,
        fn=named_function("exp_over_zminus1", working_radius),
        poles=((1.0 + 0j, 1),),
    )
    return EquationCase(
        name="compare",
        description="y'' + e^z y' + f0 y = 0 with solution e^z/(z-1)",
        coefficients=(f0, f1),
        solutions=(sol,),
    )


CASE_BUILDERS: dict[str, Callable[..., EquationCase]] = {
    "exp": exp_case,
    "harmonic": harmonic_case,
    "euler": euler_case,
    "expq": expq_case,
    "compare": compare_case,
}

CORPUS = ("exp", "harmonic", "euler", "expq")


def load_case(name: str, working_radius: float = DEFAULT_WORKING_RADIUS) -> EquationCase:
    try:
        builder = CASE_BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown equation case {name!r}; have {sorted(CASE_BUILDERS)}"
        ) from None
    return builder(working_radius)


def corpus_cases(working_radius: float = DEFAULT_WORKING_RADIUS) -> list[EquationCase]:
    return [load_case(n, working_radius) for n in CORPUS]
