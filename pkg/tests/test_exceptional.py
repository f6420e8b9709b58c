"""Exclusion disks, minimum-modulus verification, radial density accounting."""

import math

import numpy as np
import pytest

from merogrowth import (
    ALPHA,
    BoundDomainError,
    EntireSum,
    MeroFn,
    NotNormalizedError,
    Polynomial,
    RadialExceptionalSet,
    assign_zeros_to_annuli,
    build_annular_disks,
    build_exclusion_disks,
    cartan_disks,
    density_ceiling,
    log_density,
    radial_projection,
    verified_exclusion_disks,
    verify_density_lemma,
    verify_levin,
)
from merogrowth.exceptional import disk_samples

WR = 2000.0

# 50-digit evaluations of the closed forms
CEILING_ETA_0004 = 0.46049133969982003
CEILING_ETA_0002 = 0.23024566984991002
ETA_THRESHOLD = 0.0086863739991450772  # (1 + log 2)/(16 e^{5/2})


def poly_fn(roots, lead=1.0, wr=WR):
    return MeroFn(Polynomial.from_roots(roots, lead=lead), working_radius=wr)


def normalized_poly(roots, wr=WR):
    """Polynomial with the given roots scaled so f(0) = 1."""
    v0 = np.prod([-r for r in roots])
    return poly_fn(roots, lead=1.0 / v0, wr=wr)


def merge_intervals_oracle(pairs):
    """Brute-force 1-D union by sort and sweep."""
    out = []
    for lo, hi in sorted(pairs):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


def test_density_ceiling_frozen_values():
    assert density_ceiling(0.004) == pytest.approx(CEILING_ETA_0004, rel=1e-12)
    assert density_ceiling(0.002) == pytest.approx(CEILING_ETA_0002, rel=1e-12)
    # linear in eta
    assert density_ceiling(0.004) == pytest.approx(2 * density_ceiling(0.002), rel=1e-12)
    assert density_ceiling(ETA_THRESHOLD) == pytest.approx(1.0, rel=1e-12)


def test_eta_domain_guard():
    with pytest.raises(BoundDomainError):
        density_ceiling(0.0)
    with pytest.raises(BoundDomainError):
        build_annular_disks([(5.0 + 0j, 1)], 3 * math.e / 2 + 0.01)


def test_exclusion_disk_budget():
    zeros = [(0.3 + 0j, 1), (-0.5j, 2), (0.2 + 0.2j, 1)]
    eta = 0.1
    R = 1.0
    disks = build_exclusion_disks(zeros, R, eta)
    assert disks.total_radius <= 4 * eta * R + 1e-12
    # multiplicity-proportional split: radii 0.1, 0.2, 0.1
    radii = sorted(rad for _, rad in disks.disks)
    assert radii == pytest.approx([0.1, 0.1, 0.2], rel=1e-12)


def test_cartan_disks_budget():
    rng = np.random.default_rng(3)
    zeros = [(complex(a, b), 1) for a, b in rng.normal(size=(12, 2))]
    budget = 0.7
    disks = cartan_disks(zeros, budget)
    assert disks.total_radius <= budget + 1e-12
    for c, _ in zeros:
        assert disks.contains(c)


def test_radial_projection_matches_bruteforce():
    rng = np.random.default_rng(20)
    mods = rng.uniform(1.0, 300.0, size=20)
    angs = rng.uniform(0.0, 2 * math.pi, size=20)
    zeros = [(complex(m * math.cos(a), m * math.sin(a)), 1)
             for m, a in zip(mods, angs)]
    disks = build_annular_disks(zeros, 0.05)
    eset = radial_projection(disks)

    want = merge_intervals_oracle(
        [(abs(c) - rad, abs(c) + rad) for c, rad in disks.disks])
    got = [(a, b) for a, b in eset.intervals]
    assert len(got) == len(want)
    for (a, b), (wa, wb) in zip(got, want):
        assert a == pytest.approx(wa, abs=1e-12)
        assert b == pytest.approx(wb, abs=1e-12)

    # membership scan against the raw disks
    ts = np.linspace(0.5, 320.0, 4001)
    for t in ts:
        in_disks = any(abs(t - abs(c)) <= rad for c, rad in disks.disks)
        assert eset.contains(float(t)) == in_disks


def test_interval_union_normalization():
    es = RadialExceptionalSet(((2.0, 3.0), (2.5, 4.0), (10.0, 11.0)))
    assert es.intervals == ((2.0, 4.0), (10.0, 11.0))


def test_log_measure_and_density_exact():
    es = RadialExceptionalSet(((2.0, 4.0), (10.0, 11.0)))
    r = 20.0
    want = math.log(4.0 / 2.0) + math.log(11.0 / 10.0)
    assert es.log_measure(r) == pytest.approx(want, rel=1e-12)
    assert log_density(es, r) == pytest.approx(want / math.log(r), rel=1e-12)
    # truncation at r inside an interval
    assert es.log_measure(3.0) == pytest.approx(math.log(3.0 / 2.0), rel=1e-12)


def test_levin_single_zero():
    f = poly_fn([1.0 + 0j])  # 1 - z after normalization ... f(0) = -1
    # from_roots gives z - 1; normalize to 1 - z so f(0) = 1
    f = poly_fn([1.0 + 0j], lead=-1.0)
    disks = build_exclusion_disks(f.zeros_in(2 * math.e * 1.0), 1.0, 0.1)
    rep = verify_levin(f, 1.0, 0.1, disks)
    assert rep.passed
    assert rep.min_margin > 0
    assert rep.samples_requested == 100000


def test_levin_constant_function():
    f = MeroFn(Polynomial([1.0]), working_radius=WR)
    disks = build_exclusion_disks([], 1.0, 0.05)
    rep = verify_levin(f, 1.0, 0.05, disks)
    assert rep.passed


def test_levin_random_degree10():
    rng = np.random.default_rng(77)
    mods = rng.uniform(0.3, 4.0, size=10)
    angs = rng.uniform(0, 2 * math.pi, size=10)
    roots = [complex(m * math.cos(a), m * math.sin(a)) for m, a in zip(mods, angs)]
    f = normalized_poly(roots)
    disks = build_exclusion_disks(f.zeros_in(2 * math.e), 1.0, 0.05)
    rep = verify_levin(f, 1.0, 0.05, disks)
    assert rep.passed


def test_levin_rejects_unnormalized():
    f = poly_fn([1.0 + 0j], lead=-2.0)  # f(0) = 2
    disks = build_exclusion_disks(f.zeros_in(2 * math.e), 1.0, 0.1)
    with pytest.raises(NotNormalizedError):
        verify_levin(f, 1.0, 0.1, disks)


def test_verified_exclusion_disks_wrapper():
    f = poly_fn([1.0 + 0j], lead=-1.0)
    disks, rep = verified_exclusion_disks(f, 1.0, 0.1)
    assert rep.passed
    assert disks.total_radius <= 4 * 0.1 * 1.0 + 1e-12


def test_annulus_assignment():
    zeros = [(2.0 + 0j, 1), (6.0 + 0j, 1), (ALPHA ** 2 * 1.5 + 0j, 2)]
    groups = assign_zeros_to_annuli(zeros)
    # |z| = 2 < alpha is exempt from the annulus ladder
    flat = [z for g in groups.values() for z in g]
    assert all(abs(c) >= ALPHA for c, _ in flat)
    assert any(abs(abs(c) - 6.0) < 1e-12 for c, _ in flat)


def test_density_lemma_sin_zeros_modest_radius():
    ks = range(1, 33)  # zeros at +-k pi up to ~100
    zeros = [(0j, 1)]
    for k in ks:
        zeros.append((k * math.pi + 0j, 1))
        zeros.append((-k * math.pi + 0j, 1))
    grid = np.geomspace(10.0, 100.0, 12)
    rep = verify_density_lemma(zeros, 0.004, [float(r) for r in grid])
    assert rep.passed
    assert max(rec.density for rec in rep.records) < 0.05


def test_density_adversarial_single_annulus():
    # every zero in one annulus: the budget is spent in one place and the
    # projected measure still stays under the ceiling
    base = ALPHA ** 2 * 2.0
    zeros = [(base * np.exp(2j * math.pi * k / 40), 1) for k in range(40)]
    grid = [base * 1.5, base * 4.0, base * 20.0]
    rep = verify_density_lemma(zeros, 0.004, grid)
    assert rep.passed
    for rec in rep.records:
        assert rec.density <= rec.ceiling * (1 + 1e-6)


def test_disk_samples_deterministic():
    a = disk_samples(2.0, 500)
    b = disk_samples(2.0, 500)
    assert np.array_equal(a, b)
    assert len(a) == 500
    assert np.max(np.abs(a)) <= 2.0 + 1e-12
    # fills the disk rather than clustering on a ring
    assert np.min(np.abs(a)) < 0.2


def test_density_report_csv(tmp_path):
    rep = verify_density_lemma([(3.0 + 0j, 1)], 0.004, [10.0, 50.0])
    out = tmp_path / "density.csv"
    rep.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1] == "r,density,ceiling"
    assert len(lines) == 4
