"""Rational/entire function layer: evaluation, roots, circle scans."""

import math

import numpy as np
import pytest

from merogrowth import (
    EntireSum,
    MeroFn,
    NotNormalizedError,
    OutsideDomainError,
    Polynomial,
    UnsupportedFunctionError,
)
from merogrowth.functions import (
    count_by_argument_principle,
    eval_at,
    max_modulus,
    named_function,
    rational_product,
    rational_sum,
    reciprocal,
)

WR = 2000.0


def ratfn(num, den=None, **kw):
    kw.setdefault("working_radius", WR)
    return MeroFn(Polynomial(num), Polynomial(den) if den is not None else None, **kw)


# f = (z^2+1)/(z-1) is the shared workhorse below.
@pytest.fixture()
def workhorse():
    return ratfn([1.0, 0.0, 1.0], [-1.0, 1.0])


def test_eval_rational_point(workhorse):
    # (z^2+1)/(z-1) at 2i: (-3)/(2i-1) = 3/5 + 6/5 i
    v = eval_at(workhorse, 2j)
    assert abs(v - (0.6 + 1.2j)) < 1e-14


def test_eval_beyond_working_radius(workhorse):
    with pytest.raises(OutsideDomainError):
        eval_at(workhorse, WR * 2 + 0j)


def test_derivative_matches_quotient_rule(workhorse):
    # f' = (z^2 - 2z - 1)/(z-1)^2, checked pointwise
    d = workhorse.derivative()
    for z in (3.0 + 0j, -2j, 0.5 + 0.5j, 10.0 - 3j):
        want = (z * z - 2 * z - 1) / (z - 1) ** 2
        assert abs(eval_at(d, z) - want) < 1e-12 * max(1.0, abs(want))


def test_max_modulus_circle(workhorse):
    # frozen from a 1e6-point scan with golden-section refinement: the max
    # sits at theta = 0 where f(3) = 10/2 = 5
    assert max_modulus(workhorse, 3.0) == pytest.approx(5.0, rel=1e-6)


def test_max_modulus_beyond_radius(workhorse):
    with pytest.raises(OutsideDomainError):
        max_modulus(workhorse, WR * 3)


def test_argument_principle_count(workhorse):
    # two zeros (+-i) minus one pole (1) inside |z| = 2
    assert count_by_argument_principle(workhorse, 2.0) == 1


def test_zeros_and_poles_in(workhorse):
    zs = sorted(workhorse.zeros_in(2.0), key=lambda t: t[0].imag)
    assert len(zs) == 2
    assert abs(zs[0][0] + 1j) < 1e-9 and zs[0][1] == 1
    assert abs(zs[1][0] - 1j) < 1e-9 and zs[1][1] == 1
    ps = workhorse.poles_in(2.0)
    assert len(ps) == 1 and abs(ps[0][0] - 1.0) < 1e-9 and ps[0][1] == 1


def test_polynomial_root_clustering():
    p = Polynomial.from_roots([1.0 + 0j, 1.0 + 0j, -2.0 + 0j])
    got = sorted(p.clustered_roots(), key=lambda t: t[0].real)
    assert len(got) == 2
    assert got[0][1] == 1 and abs(got[0][0] + 2.0) < 1e-7
    assert got[1][1] == 2 and abs(got[1][0] - 1.0) < 1e-6


def test_polynomial_from_roots_roundtrip():
    rng = np.random.default_rng(7)
    roots = rng.normal(size=5) + 1j * rng.normal(size=5)
    p = Polynomial.from_roots(list(roots), lead=2.0 - 1j)
    rec = sorted(p.roots(), key=lambda z: (z.real, z.imag))
    want = sorted(roots, key=lambda z: (z.real, z.imag))
    assert np.allclose(rec, want, atol=1e-8)


def test_root_order_at():
    p = Polynomial.from_roots([0j, 0j, 3.0 + 0j])
    assert p.root_order_at(0j) == 2
    assert p.root_order_at(3.0 + 0j) == 1
    assert p.root_order_at(1.0 + 0j) == 0


def test_origin_pole_order():
    f = ratfn([2.0], [0.0, 0.0, 1.0])  # 2/z^2
    assert f.origin_pole_order() == 2
    g = ratfn([1.0], [-1.0, 1.0])
    assert g.origin_pole_order() == 0


def test_entire_sum_log_abs_is_scale_safe():
    e = EntireSum.exponential(1.0)
    # direct evaluation of e^700 overflows a double; the log path must not
    z = np.array([700.0 + 0j])
    assert float(e.log_abs(z)[0]) == pytest.approx(700.0, rel=1e-12)


def test_entire_sum_scaled_eval_matches_direct():
    e = EntireSum.exponential(1.0)
    for z in (0.3 + 0.2j, -1.5j, 2.0 + 0j):
        m, s = e.eval_scaled(np.array([z]))
        assert abs(m[0] * math.exp(s[0]) - np.exp(z)) < 1e-12 * abs(np.exp(z))


def test_entire_sum_derivative():
    s = EntireSum.sin(1.0)
    c = s.derivative()
    for z in (0.7 + 0j, 1.0 + 0.5j):
        mv, sc = c.eval_scaled(np.array([z]))
        assert abs(mv[0] * math.exp(sc[0]) - np.cos(z)) < 1e-12


def test_named_function_registry():
    f = named_function("exp", WR)
    assert abs(eval_at(f, 1.0 + 0j) - math.e) < 1e-12
    with pytest.raises(KeyError):
        named_function("gamma", WR)


def test_unsupported_derivative_rule():
    f = MeroFn(EntireSum.exponential(1.0) , working_radius=WR, zeros=())
    assert f.derivative() is not None  # exp has a rule
    with pytest.raises(UnsupportedFunctionError):
        rational_product(f, f)


def test_reciprocal_swaps_zeros_and_poles(workhorse):
    g = reciprocal(workhorse)
    assert len(g.poles_in(2.0)) == 2
    assert len(g.zeros_in(2.0)) == 1
    assert abs(eval_at(g, 2j) * eval_at(workhorse, 2j) - 1.0) < 1e-12


def test_rational_arithmetic():
    f = ratfn([1.0], [-1.0, 1.0])      # 1/(z-1)
    g = ratfn([0.0, 1.0])              # z
    prod = rational_product(f, g)
    tot = rational_sum(f, g)
    for z in (2j, 3.0 + 0j, -0.5 + 0.25j):
        assert abs(eval_at(prod, z) - z / (z - 1)) < 1e-12
        assert abs(eval_at(tot, z) - (1 / (z - 1) + z)) < 1e-12


def test_quotient_parts_reassemble():
    f = ratfn([1.0, 0.0, 1.0], [-1.0, 1.0])
    num, den = f.quotient_parts()
    for z in (2j, 3.0 + 0j):
        assert abs(eval_at(num, z) / eval_at(den, z) - eval_at(f, z)) < 1e-10
