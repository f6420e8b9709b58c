"""Function representations with exact zero/pole data.

The toolkit works with a deliberately small class of functions that is closed
under differentiation and carries exact singularity data:

* polynomials and rational functions given by coefficient lists,
* entire exponential sums  sum_k p_k(z) * exp(b_k z)  with polynomial p_k
  (this covers exp, sin, cos and their products with polynomials), and
* quotients of an exponential sum by a polynomial.

Every function object exposes a vectorised evaluator, a numerically stable
``log_abs`` (needed far out on large circles where the plain value overflows),
a ``derivative`` rule, and declared zero/pole lists inside a working disk.
Declared pole lists are cross-checked against a numerical contour count
(:func:`count_by_argument_principle`) before any counting integral trusts
them.

Evaluation guards: points outside the working disk raise
:class:`OutsideDomainError`; points within ``POLE_GUARD_REL`` times the
working radius of a declared pole raise :class:`PoleProximityError`.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Sequence

import numpy as np

from .errors import (
    NonIntegerResidueError,
    OutsideDomainError,
    PoleOnCircleError,
    PoleProximityError,
    UnsupportedFunctionError,
    UnvalidatedPoleListError,
    ZeroDataUnavailableError,
)

POLE_GUARD_REL = 1e-8
WORKING_DISK_FACTOR = 4.0 * math.e**2
REDUCED_TOL = 1e-10

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def default_working_radius(r_max: float) -> float:
    """Working disk radius covering every enlargement the bounds use."""
    return WORKING_DISK_FACTOR * float(r_max)


def _cluster_points(points: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    """Greedy clustering of near-coincident roots into (location, multiplicity)."""
    out: list[tuple[complex, int]] = []
    for p in sorted(points, key=lambda w: (round(w.real, 12), round(w.imag, 12))):
        for i, (c, m) in enumerate(out):
            if abs(p - c) <= tol:
                out[i] = ((c * m + p) / (m + 1), m + 1)
                break
        else:
            out.append((p, 1))
    return out


class Polynomial:
    """Dense polynomial, coefficients ascending by power."""

    __slots__ = ("coeffs", "_roots")

    def __init__(self, coeffs: Sequence[complex]):
        cs = [complex(c) for c in coeffs] or [0j]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._roots: tuple[complex, ...] | None = None

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-complex(r), 1.0])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return self.degree == 0

    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc if acc.shape else complex(acc)

    def log_abs(self, z):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self(np.asarray(z, dtype=complex))))

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0.0])
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def roots(self) -> tuple[complex, ...]:
        if self._roots is None:
            if self.degree == 0:
                self._roots = ()
            else:
                rs = np.roots(list(reversed(self.coeffs)))
                self._roots = tuple(complex(r) for r in rs)
        return self._roots

    def clustered_roots(self, tol: float = 1e-6) -> list[tuple[complex, int]]:
        scale = max(1.0, max(abs(r) for r in self.roots()) if self.roots() else 1.0)
        return _cluster_points(self.roots(), tol * scale)

    def root_order_at(self, point: complex, tol: float = 1e-9) -> int:
        return sum(m for c, m in self.clustered_roots() if abs(c - point) <= tol)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out = [0j] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        return Polynomial([c * complex(other) for c in self.coeffs])

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([complex(other)])
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([complex(other)])
        return self + (other * (-1.0))

    def __neg__(self):
        return self * (-1.0)

    def __repr__(self):
        return f"Polynomial(degree={self.degree})"


_P_ZERO = Polynomial([0.0])
_P_ONE = Polynomial([1.0])


class EntireSum:
    """Entire exponential sum  sum_k p_k(z) * exp(b_k z).

    sin and cos enter through their exponential splittings, so the class is
    closed under differentiation and products with polynomials.  Evaluation
    runs in scaled form (mantissa, log-scale) so that ``log_abs`` stays exact
    where the plain value would overflow.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Sequence[tuple[Polynomial, complex]]):
        merged: dict[complex, Polynomial] = {}
        for poly, b in terms:
            b = complex(b)
            merged[b] = merged[b] + poly if b in merged else poly
        kept = [(p, b) for b, p in merged.items() if not p.is_zero()]
        kept.sort(key=lambda t: (t[1].real, t[1].imag))
        self.terms = tuple(kept) or ((_P_ZERO, 0j),)

    @classmethod
    def poly(cls, p: Polynomial) -> "EntireSum":
        return cls([(p, 0j)])

    @classmethod
    def exponential(cls, a: complex = 1.0, poly: Polynomial | None = None) -> "EntireSum":
        return cls([(poly if poly is not None else _P_ONE, complex(a))])

    @classmethod
    def sin(cls, a: complex = 1.0) -> "EntireSum":
        ia = 1j * complex(a)
        return cls([(Polynomial([-0.5j]), ia), (Polynomial([0.5j]), -ia)])

    @classmethod
    def cos(cls, a: complex = 1.0) -> "EntireSum":
        ia = 1j * complex(a)
        return cls([(Polynomial([0.5]), ia), (Polynomial([0.5]), -ia)])

    def eval_scaled(self, z):
        """Return (mantissa, scale) with value = mantissa * exp(scale)."""
        z = np.asarray(z, dtype=complex)
        exps = np.stack([(b * z).real for _, b in self.terms])
        scale = exps.max(axis=0)
        acc = np.zeros(z.shape, dtype=complex)
        for (poly, b) in self.terms:
            acc = acc + poly(z) * np.exp(b * z - scale)
        return acc, scale

    def __call__(self, z):
        m, s = self.eval_scaled(z)
        with np.errstate(over="ignore"):
            v = m * np.exp(s)
        return v if np.asarray(v).shape else complex(v)

    def log_abs(self, z):
        m, s = self.eval_scaled(z)
        with np.errstate(divide="ignore"):
            return s + np.log(np.abs(m))

    def derivative(self) -> "EntireSum":
        return EntireSum([(p.derivative() + p * b, b) for p, b in self.terms])

    def value_at_zero(self) -> complex:
        return complex(sum(p(0j) for p, _ in self.terms))

    def is_constant(self) -> bool:
        return all(b == 0 and p.is_constant() for p, b in self.terms)

    def is_polynomial(self) -> bool:
        return all(b == 0 for _, b in self.terms)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return EntireSum([(p * other, b) for p, b in self.terms])
        return EntireSum([(p * complex(other), b) for p, b in self.terms])

    __rmul__ = __mul__

    def __add__(self, other: "EntireSum") -> "EntireSum":
        return EntireSum(list(self.terms) + list(other.terms))

    def __neg__(self):
        return self * (-1.0)

    def __repr__(self):
        return f"EntireSum({len(self.terms)} terms)"


ZeroList = Sequence[tuple[complex, int]]


class MeroFn:
    """A meromorphic function on a working disk, with declared singularities.

    ``num`` is a :class:`Polynomial` or :class:`EntireSum`; ``den`` is a
    :class:`Polynomial`.  Poles are the denominator roots (the constructor
    rejects quotients where a denominator root kills the numerator).  Zeros
    are exhaustive only when the numerator is a polynomial or when the caller
    declares them (possibly as a generator of zeros up to a radius).
    """

    def __init__(
        self,
        num: Polynomial | EntireSum,
        den: Polynomial | None = None,
        *,
        working_radius: float,
        name: str = "f",
        zeros: ZeroList | Callable[[float], list[tuple[complex, int]]] | None = None,
        poles: ZeroList | None = None,
        _pole_validation_radius: float = 0.0,
    ):
        if working_radius <= 0:
            raise ValueError("working radius must be positive")
        self.num = num
        self.den = den if den is not None else _P_ONE
        self.working_radius = float(working_radius)
        self.name = name

        if poles is not None:
            self._poles = tuple((complex(c), int(m)) for c, m in poles)
        elif self.den.is_constant():
            self._poles = ()
        else:
            self._poles = tuple(self.den.clustered_roots())
        if not self.den.is_constant() and poles is None:
            if isinstance(self.num, Polynomial) and self.num.degree > 0:
                for c, _ in self._poles:
                    if any(abs(c - w) <= REDUCED_TOL for w in self.num.roots()):
                        raise ValueError(
                            f"common factor near {c:.6g}; reduce the quotient first"
                        )
            elif isinstance(self.num, EntireSum):
                for c, _ in self._poles:
                    if abs(np.asarray(self.num(c))) < 1e-12:
                        raise ValueError(
                            f"denominator root {c:.6g} is not a pole; reduce the quotient first"
                        )

        if callable(zeros):
            self._zeros_fn: Callable | None = zeros
            self._zeros: tuple | None = None
        elif zeros is not None:
            self._zeros_fn = None
            self._zeros = tuple((complex(c), int(m)) for c, m in zeros)
        elif isinstance(num, Polynomial):
            self._zeros_fn = None
            self._zeros = tuple(num.clustered_roots()) if num.degree > 0 else ()
        else:
            self._zeros_fn = None
            self._zeros = None
        self._pole_validation_radius = _pole_validation_radius
        self._zero_validation_radius = 0.0

    # -- classification -------------------------------------------------

    @property
    def kind(self) -> str:
        if isinstance(self.num, Polynomial):
            return "rational"
        return "closed-form" if self.den.is_constant() else "quotient"

    def is_entire(self) -> bool:
        return not self._poles

    def is_constant(self) -> bool:
        if isinstance(self.num, Polynomial):
            return self.num.is_constant() and self.den.is_constant()
        return self.num.is_constant() and self.den.is_constant()

    @property
    def zeros_known(self) -> bool:
        return self._zeros is not None or self._zeros_fn is not None

    # -- singularity data -----------------------------------------------

    def poles_in(self, radius: float) -> list[tuple[complex, int]]:
        return [(c, m) for c, m in self._poles if abs(c) <= radius]

    def zeros_in(self, radius: float) -> list[tuple[complex, int]]:
        if self._zeros_fn is not None:
            return [(c, m) for c, m in self._zeros_fn(radius) if abs(c) <= radius]
        if self._zeros is None:
            raise ZeroDataUnavailableError(
                f"{self.name}: exhaustive zero data not declared"
            )
        return [(c, m) for c, m in self._zeros if abs(c) <= radius]

    @property
    def pole_guard(self) -> float:
        return POLE_GUARD_REL * self.working_radius

    # -- evaluation ------------------------------------------------------

    def _eval_array(self, z):
        z = np.asarray(z, dtype=complex)
        if isinstance(self.num, Polynomial):
            n = self.num(z)
        else:
            n = self.num(z)
        if self.den.is_constant():
            return n / self.den.coeffs[0]
        return n / self.den(z)

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        n = self.num.log_abs(z)
        if self.den.is_constant():
            return n - math.log(abs(self.den.coeffs[0]))
        return n - self.den.log_abs(z)

    def __call__(self, z: complex) -> complex:
        return eval_at(self, z)

    # -- calculus --------------------------------------------------------

    def derivative(self) -> "MeroFn":
        return differentiate(self)

    # -- quotient access -------------------------------------------------

    def quotient_parts(self) -> tuple["MeroFn", "MeroFn"]:
        """Numerator and denominator as entire functions on the same disk."""
        if isinstance(self.num, Polynomial):
            top: MeroFn = MeroFn(
                self.num, working_radius=self.working_radius, name=self.name + ".num"
            )
        else:
            top = MeroFn(
                self.num,
                working_radius=self.working_radius,
                name=self.name + ".num",
                zeros=self._zeros if self.zeros_known and self._zeros_fn is None else self._zeros_fn,
            )
        bottom = MeroFn(
            self.den, working_radius=self.working_radius, name=self.name + ".den"
        )
        return top, bottom

    def origin_pole_order(self) -> int:
        if self.den.is_constant():
            return 0
        return self.den.root_order_at(0j)

    # -- pole list validation -------------------------------------------

    def ensure_pole_list_validated(self, radius: float) -> None:
        """Contour-count the denominator's roots inside ``radius``.

        Poles of the quotient are exactly the denominator roots (checked at
        construction), so counting denominator zeros by the argument
        principle validates the declared pole list.  The result is cached as
        a high-water radius.
        """
        if radius <= self._pole_validation_radius:
            return
        if not self._poles:
            self._pole_validation_radius = radius
            return
        den_fn = MeroFn(self.den, working_radius=self.working_radius, name=self.name + ".den")
        r_c = _clear_contour_radius(radius, [abs(c) for c, _ in self._poles], self.working_radius)
        try:
            counted = count_by_argument_principle(den_fn, r_c)
        except NonIntegerResidueError as exc:
            raise UnvalidatedPoleListError(
                f"{self.name}: contour count failed at radius {r_c:.6g}: {exc}"
            ) from exc
        declared = sum(m for c, m in self._poles if abs(c) < r_c)
        if counted != declared:
            raise UnvalidatedPoleListError(
                f"{self.name}: contour count {counted} != declared {declared} inside {r_c:.6g}"
            )
        self._pole_validation_radius = radius

    def ensure_zero_list_validated(self, radius: float) -> None:
        """Contour-count zeros minus poles of the function itself.

        Together with the validated pole list this pins the declared zero
        count inside ``radius``.
        """
        if not self.zeros_known:
            raise ZeroDataUnavailableError(
                f"{self.name}: cannot validate zeros, none declared"
            )
        if radius <= self._zero_validation_radius:
            return
        self.ensure_pole_list_validated(radius)
        probe = self.zeros_in(radius * 1.01)
        moduli = [abs(c) for c, _ in probe] + [abs(c) for c, _ in self._poles]
        r_c = _clear_contour_radius(radius, moduli, self.working_radius)
        try:
            counted = count_by_argument_principle(self, r_c)
        except NonIntegerResidueError as exc:
            raise UnvalidatedPoleListError(
                f"{self.name}: zero-count contour failed at radius {r_c:.6g}: {exc}"
            ) from exc
        predicted = sum(m for c, m in probe if abs(c) < r_c) - sum(
            m for c, m in self._poles if abs(c) < r_c
        )
        if counted != predicted:
            raise UnvalidatedPoleListError(
                f"{self.name}: contour count {counted} != declared zero-pole "
                f"difference {predicted} inside {r_c:.6g}"
            )
        self._zero_validation_radius = radius

    def __repr__(self):
        return f"MeroFn({self.name!r}, kind={self.kind!r}, R={self.working_radius:.3g})"


def _clear_contour_radius(radius: float, moduli: Sequence[float], working: float) -> float:
    """Smallest radius >= ``radius`` whose circle clears the given moduli."""
    r_c = radius * (1.0 + 1e-9)
    guard = max(1e-7 * radius, POLE_GUARD_REL * working)
    for _ in range(64):
        if all(abs(m - r_c) > guard for m in moduli):
            return r_c
        r_c *= 1.0 + 4e-6
    return r_c


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def eval_at(f: MeroFn, z: complex) -> complex:
    """Evaluate ``f`` at one point, enforcing domain and pole guards."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("evaluation point must be finite")
    if abs(z) > f.working_radius:
        raise OutsideDomainError(
            f"|z| = {abs(z):.6g} exceeds working radius {f.working_radius:.6g}"
        )
    for c, _ in f._poles:
        if abs(z - c) < f.pole_guard:
            raise PoleProximityError(
                f"z = {z:.6g} is within guard {f.pole_guard:.3g} of pole {c:.6g}"
            )
    return complex(f._eval_array(z))


def differentiate(f: MeroFn) -> MeroFn:
    """Derivative with exact pole bookkeeping (multiplicities increase by one)."""
    num, den = f.num, f.den
    if isinstance(num, Polynomial) and den.is_constant():
        return MeroFn(
            num.derivative() * (1.0 / den.coeffs[0]),
            working_radius=f.working_radius,
            name=f.name + "'",
        )
    if isinstance(num, Polynomial):
        # (p'q - pq')/q^2 carries the factor prod (z-a)^(m-1) over poles of
        # multiplicity m; divide it out exactly so declared multiplicities
        # (each bumped by one) match the rebuilt denominator.
        new_num = num.derivative() * den - num * den.derivative()
        bumped = [(c, m + 1) for c, m in f._poles]
        for c, m in f._poles:
            for _ in range(m - 1):
                new_num = _deflate(new_num, c)
        lead = den.coeffs[-1]
        expanded = [c for c, m in bumped for _ in range(m)]
        new_den = Polynomial.from_roots(expanded, lead * lead)
        return MeroFn(
            new_num,
            new_den,
            working_radius=f.working_radius,
            name=f.name + "'",
            poles=bumped,
        )
    if isinstance(num, EntireSum):
        if den.is_constant():
            return MeroFn(
                num.derivative() * (1.0 / den.coeffs[0]),
                working_radius=f.working_radius,
                name=f.name + "'",
                zeros=None,
            )
        # Quotient rule leaves a known common factor at each pole; the pole
        # list is declared directly rather than re-derived from den^2.
        new_num = num.derivative() * den + num * (-1.0 * den.derivative())
        new_den = den * den
        bumped = [(c, m + 1) for c, m in f._poles]
        return MeroFn(
            new_num,
            new_den,
            working_radius=f.working_radius,
            name=f.name + "'",
            poles=bumped,
            _pole_validation_radius=f._pole_validation_radius,
        )
    raise UnsupportedFunctionError(f"no derivative rule for {type(num).__name__}")


def _deflate(p: Polynomial, root: complex) -> Polynomial:
    """Synthetic division of p by (z - root); remainder discarded."""
    cs = list(p.coeffs)
    out = [0j] * (len(cs) - 1)
    carry = cs[-1]
    for k in range(len(cs) - 2, -1, -1):
        out[k] = carry
        carry = cs[k] + carry * root
    return Polynomial(out)


def _reduce_rational(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Cancel matching root pairs (root-matching GCD) and rebuild coefficients."""
    if den.is_constant() or num.is_zero():
        return num, den
    nroots = list(num.roots())
    droots = list(den.roots())
    scale = max([1.0] + [abs(r) for r in nroots + droots])
    # multiple roots from np.roots split by ~sqrt(eps); match at cluster scale
    tol = max(REDUCED_TOL, 1e-6 * scale)
    kept_d = []
    for dr in droots:
        hit = None
        for i, nr in enumerate(nroots):
            if abs(nr - dr) <= tol:
                hit = i
                break
        if hit is None:
            kept_d.append(dr)
        else:
            nroots.pop(hit)
    lead_n = num.coeffs[-1]
    lead_d = den.coeffs[-1]
    return (
        Polynomial.from_roots(nroots, lead_n),
        Polynomial.from_roots(kept_d, lead_d),
    )


def reciprocal(f: MeroFn) -> MeroFn:
    """1/f, supported for the rational kind (zeros and poles swap roles)."""
    if not isinstance(f.num, Polynomial):
        raise UnsupportedFunctionError(
            f"{f.name}: reciprocal only available for rational functions"
        )
    if f.num.is_zero():
        raise ValueError("cannot invert the zero function")
    return MeroFn(
        f.den, f.num, working_radius=f.working_radius, name=f"1/({f.name})"
    )


def rational_product(f: MeroFn, g: MeroFn) -> MeroFn:
    """f*g for rational kind, reduced by root matching."""
    if not (isinstance(f.num, Polynomial) and isinstance(g.num, Polynomial)):
        raise UnsupportedFunctionError("product supported for rational kind only")
    num, den = _reduce_rational(f.num * g.num, f.den * g.den)
    return MeroFn(
        num,
        den,
        working_radius=min(f.working_radius, g.working_radius),
        name=f"({f.name})*({g.name})",
    )


def rational_sum(f: MeroFn, g: MeroFn) -> MeroFn:
    """f+g for rational kind, reduced by root matching."""
    if not (isinstance(f.num, Polynomial) and isinstance(g.num, Polynomial)):
        raise UnsupportedFunctionError("sum supported for rational kind only")
    num = f.num * g.den + g.num * f.den
    den = f.den * g.den
    num, den = _reduce_rational(num, den)
    return MeroFn(
        num,
        den,
        working_radius=min(f.working_radius, g.working_radius),
        name=f"({f.name})+({g.name})",
    )


def max_modulus(f: MeroFn, r: float, samples: int = 4096) -> float:
    """Maximum of |f| on the circle |z| = r (may overflow to inf; see log twin)."""
    log_m, _ = max_log_modulus(f, r, samples)
    if log_m > 709.0:
        return math.inf
    return math.exp(log_m)


def max_log_modulus(f: MeroFn, r: float, samples: int = 4096) -> tuple[float, float]:
    """Max of log|f| on |z| = r and the angular resolution used.

    Equispaced scan followed by a golden-section refinement around the
    discrete argmax.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if r > f.working_radius:
        raise OutsideDomainError(f"circle radius {r:.6g} outside working disk")
    _check_circle_clear(f, r)
    theta = np.linspace(0.0, 2.0 * math.pi, int(samples), endpoint=False)
    vals = f.log_abs(r * np.exp(1j * theta))
    k = int(np.argmax(vals))
    width = 2.0 * math.pi / samples
    lo, hi = theta[k] - width, theta[k] + width

    def g(t: float) -> float:
        return float(f.log_abs(r * cmath.exp(1j * t)))

    a, b = lo, hi
    c1 = b - _GOLDEN * (b - a)
    c2 = a + _GOLDEN * (b - a)
    g1, g2 = g(c1), g(c2)
    for _ in range(80):
        if g1 < g2:
            a, c1, g1 = c1, c2, g2
            c2 = a + _GOLDEN * (b - a)
            g2 = g(c2)
        else:
            b, c2, g2 = c2, c1, g1
            c1 = b - _GOLDEN * (b - a)
            g1 = g(c1)
        if b - a < 1e-13:
            break
    best = max(float(vals[k]), g1, g2)
    return best, width


def _check_circle_clear(f: MeroFn, r: float) -> None:
    for c, _ in f._poles:
        if abs(abs(c) - r) < f.pole_guard:
            raise PoleOnCircleError(
                f"{f.name}: pole at {c:.6g} within guard of circle r = {r:.6g}"
            )


def count_by_argument_principle(f: MeroFn, r: float, tol: float = 1e-3) -> int:
    """Zeros minus poles inside |z| < r, by the contour integral of f'/f.

    The logarithmic derivative is assembled from the quotient parts, with
    entire sums evaluated in scaled form so the ratio stays finite far out.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if r > f.working_radius:
        raise OutsideDomainError(f"contour radius {r:.6g} outside working disk")
    _check_circle_clear(f, r)

    num, den = f.num, f.den
    dnum = num.derivative()
    dden = den.derivative() if not den.is_constant() else None

    def integrand(theta: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * theta)
        if isinstance(num, EntireSum):
            m, _ = num.eval_scaled(z)
            md, _ = dnum.eval_scaled(z)
            # identical scale grids: ratio of mantissas needs the scale gap
            sn = np.stack([(b * z).real for _, b in num.terms]).max(axis=0)
            sd = np.stack([(b * z).real for _, b in dnum.terms]).max(axis=0)
            ratio = md / m * np.exp(sd - sn)
        else:
            ratio = dnum(z) / num(z)
        if dden is not None:
            ratio = ratio - dden(z) / den(z)
        return ratio * z

    n = 64
    theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    vals = integrand(theta)
    total = complex(vals.mean())
    while n < 2**16:
        mid = theta + math.pi / n
        vmid = integrand(mid)
        new_total = complex((vals.sum() + vmid.sum()) / (2 * n))
        theta = np.concatenate([theta, mid])
        order = np.argsort(theta)
        theta = theta[order]
        vals = np.concatenate([vals, vmid])[order]
        n *= 2
        if abs(new_total - total) < 1e-9 * max(1.0, abs(new_total)):
            total = new_total
            break
        total = new_total
    count = total.real
    nearest = round(count)
    if abs(count - nearest) > tol or abs(total.imag) > tol:
        raise NonIntegerResidueError(
            f"{f.name}: contour integral {total:.6g} not near an integer"
        )
    return int(nearest)


# ---------------------------------------------------------------------------
# registry of named closed forms
# ---------------------------------------------------------------------------


def _sin_zeros(radius: float) -> list[tuple[complex, int]]:
    k_max = int(math.floor(radius / math.pi))
    return [(complex(k * math.pi), 1) for k in range(-k_max, k_max + 1)]


def _cos_zeros(radius: float) -> list[tuple[complex, int]]:
    out = []
    k = 0
    while (k + 0.5) * math.pi <= radius:
        out.append((complex((k + 0.5) * math.pi), 1))
        out.append((complex(-(k + 0.5) * math.pi), 1))
        k += 1
    return out


def named_function(name: str, working_radius: float) -> MeroFn:
    """Construct a registry function on the given working disk."""
    if name == "one":
        return MeroFn(_P_ONE, working_radius=working_radius, name="1")
    if name == "z":
        return MeroFn(Polynomial([0.0, 1.0]), working_radius=working_radius, name="z")
    if name == "z_squared":
        return MeroFn(Polynomial([0.0, 0.0, 1.0]), working_radius=working_radius, name="z^2")
    if name == "exp":
        return MeroFn(
            EntireSum.exponential(),
            working_radius=working_radius,
            name="exp",
            zeros=(),
        )
    if name == "sin":
        return MeroFn(
            EntireSum.sin(), working_radius=working_radius, name="sin", zeros=_sin_zeros
        )
    if name == "cos":
        return MeroFn(
            EntireSum.cos(), working_radius=working_radius, name="cos", zeros=_cos_zeros
        )
    if name == "exp_over_zminus1":
        return MeroFn(
            EntireSum.exponential(),
            Polynomial([-1.0, 1.0]),
            working_radius=working_radius,
            name="exp/(z-1)",
            zeros=(),
        )
    raise KeyError(f"unknown registry function {name!r}")


REGISTRY_NAMES = ("one", "z", "z_squared", "exp", "sin", "cos", "exp_over_zminus1")
