"""Proximity, counting, characteristic: analytic and frozen-oracle checks.

Frozen literals were produced by independent oracles (high-precision formula
evaluation, and fixed trapezoid quadratures at 1e6 and 2e6 points that agree
to the digits shown).
"""

import math

import numpy as np
import pytest

from merogrowth import (
    EntireSum,
    MeroFn,
    PoleOnCircleError,
    Polynomial,
    RadiusGrid,
    characteristic,
    circle_mean,
    coefficient_envelope,
    counting,
    deficiency_at_infinity,
    estimate_deficiency,
    proximity,
)
from merogrowth.functions import reciprocal

WR = 2000.0

# m(100, (z^2+1)/(z-1)): 1e6- and 2e6-point quadratures agree on this value
M_RATIONAL_R100 = 4.605170185988091
# N(10, f) for simple poles at 1 and 2i: log 10 + log 5
N_TWO_POLES_R10 = 3.9120230054281461


def ratfn(num, den=None, wr=WR):
    return MeroFn(Polynomial(num), Polynomial(den) if den is not None else None,
                  working_radius=wr)


def T_at(f, r):
    m, _ = proximity(f, r)
    return m + counting(f, r)


@pytest.mark.parametrize("r", [1.0, math.pi, 10.0, 100.0])
def test_proximity_exp(r):
    f = MeroFn(EntireSum.exponential(1.0), working_radius=WR, zeros=())
    m, _ = proximity(f, r)
    assert m == pytest.approx(r / math.pi, rel=1e-5)


def test_proximity_rational_frozen():
    f = ratfn([1.0, 0.0, 1.0], [-1.0, 1.0])
    m, _ = proximity(f, 100.0)
    assert m == pytest.approx(M_RATIONAL_R100, rel=1e-9)


@pytest.mark.parametrize("r", [1.5, 2.0, 5.0, 10.0, 100.0])
def test_counting_single_pole_exact(r):
    f = ratfn([1.0], [-1.0, 1.0])
    assert counting(f, r) == math.log(r)


def test_counting_two_poles_frozen():
    f = MeroFn(Polynomial([1.0]), Polynomial.from_roots([1.0 + 0j, 2j]),
               working_radius=WR)
    assert counting(f, 10.0) == pytest.approx(N_TWO_POLES_R10, rel=1e-12)


def test_counting_distinct_collapses_multiplicity():
    f = MeroFn(Polynomial([1.0]), Polynomial.from_roots([2.0 + 0j, 2.0 + 0j]),
               working_radius=WR)
    r = 8.0
    assert counting(f, r) == pytest.approx(2 * math.log(4.0), rel=1e-12)
    assert counting(f, r, distinct=True) == pytest.approx(math.log(4.0), rel=1e-12)


def test_counting_origin_pole_term():
    # N(r, 1/z^2) = 2 log r from the origin multiplicity alone
    f = ratfn([1.0], [0.0, 0.0, 1.0])
    assert counting(f, 7.0) == pytest.approx(2 * math.log(7.0), rel=1e-12)


def unit_modulus_roots(rng, count):
    """Roots with moduli near 1 keep the O(1) Jensen offset inside the 2% band."""
    mod = rng.uniform(0.9, 1.1, size=count)
    ang = rng.uniform(0.0, 2 * math.pi, size=count)
    return list(mod * np.exp(1j * ang))


def test_characteristic_degree_ratio():
    rng = np.random.default_rng(101)
    for _ in range(4):
        dn = int(rng.integers(1, 4))
        dd = int(rng.integers(0, 3))
        num = Polynomial.from_roots(unit_modulus_roots(rng, dn))
        den = Polynomial.from_roots(unit_modulus_roots(rng, dd)) if dd else None
        f = MeroFn(num, den, working_radius=3e6)
        deg = max(dn, dd)
        r = 1e6
        assert T_at(f, r) / math.log(r) == pytest.approx(deg, rel=0.02)


def test_characteristic_exp_over_zminus1():
    # m = r/pi - (log r)/2 + O(1) (the pole factor subtracts log r on the
    # growing half-circle), N = log r, so T = r/pi + (log r)/2 + O(1)
    f = MeroFn(EntireSum.exponential(1.0), Polynomial([-1.0, 1.0]),
               working_radius=WR, zeros=())
    for r in (50.0, 200.0):
        assert abs(T_at(f, r) - (r / math.pi + 0.5 * math.log(r))) < 1.0


def test_envelope_dominated_by_exp():
    coeffs = (
        MeroFn(EntireSum.exponential(1.0), working_radius=WR, zeros=()),
        ratfn([1.0], [-1.0, 1.0]),
    )
    grid = RadiusGrid.logspace(50.0, 100.0, 3)
    env = coefficient_envelope(coeffs, grid)
    assert env.T_of(100.0) == pytest.approx(100.0 / math.pi, rel=0.01)


def test_deficiency_exp_over_zminus1_tends_to_one():
    f = MeroFn(EntireSum.exponential(1.0), Polynomial([-1.0, 1.0]),
               working_radius=4000.0, zeros=())
    est = estimate_deficiency(f, RadiusGrid.logspace(10.0, 1000.0, 6))
    assert 0.85 < est.value < 1.0
    assert est.r_hi == 1000.0


def test_deficiency_pole_only_is_zero():
    f = MeroFn(Polynomial([1.0]), Polynomial([-1.0, 1.0]), working_radius=40000.0)
    grid = RadiusGrid.logspace(100.0, 10000.0, 5)
    assert deficiency_at_infinity(f, grid) == 0.0


def test_jensen_identity_random_rationals():
    from merogrowth.functions import eval_at

    rng = np.random.default_rng(55)
    radii = [1.7, 3.3, 12.0]
    for _ in range(6):
        dn = int(rng.integers(1, 4))
        dd = int(rng.integers(1, 3))
        num = Polynomial.from_roots(
            list(rng.normal(size=dn) + 1j * rng.normal(size=dn)), lead=1.5)
        den = Polynomial.from_roots(list(rng.normal(size=dd) + 1j * rng.normal(size=dd)))
        f = MeroFn(num, den, working_radius=WR)
        w0 = eval_at(f, 0j)
        if abs(w0) < 1e-9:
            continue
        g = reciprocal(f)
        for r in radii:
            rr = _clear_radius(f, r)
            lhs = T_at(f, rr) - T_at(g, rr)
            assert abs(lhs - math.log(abs(w0))) < 1e-3


def _clear_radius(f, r, bump=1e-3):
    """Nudge r off any zero/pole modulus so circle quadrature is defined."""
    crit = [abs(c) for c, _ in f.poles_in(2 * r)] + [abs(c) for c, _ in f.zeros_in(2 * r)]
    rr = r
    while any(abs(rr - c) < 1e-6 * max(1.0, rr) for c in crit):
        rr *= 1.0 + bump
    return rr


def test_circle_mean_doubles_until_converged():
    val, samples = circle_mean(lambda th: np.log(2.0 * np.ones_like(th)))
    assert val == pytest.approx(math.log(2.0), rel=1e-9)
    assert samples & (samples - 1) == 0  # power of two


def test_proximity_pole_on_circle_raises():
    f = ratfn([1.0], [-1.0, 1.0])
    with pytest.raises(PoleOnCircleError):
        proximity(f, 1.0)


def test_profile_csv_layout(tmp_path):
    f = ratfn([0.0, 1.0])
    prof = characteristic(f, RadiusGrid((2.0, 4.0)))
    out = tmp_path / "prof.csv"
    prof.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1].startswith("# function=")
    assert lines[2] == "r,m,N,Nbar,T,samples"
    assert len(lines) == 5


def test_profile_record_lookup():
    f = ratfn([0.0, 1.0])
    prof = characteristic(f, RadiusGrid((2.0, 4.0, 8.0)))
    rec = prof.record_at(4.0)
    assert rec.r == 4.0
    assert rec.T == pytest.approx(math.log(4.0), rel=1e-6)
    assert prof.T_of(8.0) == pytest.approx(math.log(8.0), rel=1e-6)
    with pytest.raises(KeyError):
        prof.record_at(3.0)
