"""Acceptance criteria, one test per criterion.

Each test records a single ``[PASS]``/``[FAIL]`` line that is printed in the
terminal summary.
"""

import math
import time

import numpy as np
import pytest

from bergman_content import MapCoeffs
from bergman_content.closedform import (
    annulus_closedforms,
    bergman_content,
    confocal_coeffs,
    confocal_content_sq,
    monomial_critical_constant,
    monomial_radial_profile,
)
from bergman_content.oracle import (
    fd_torsion,
    gram_project_annulus,
    gram_project_confocal,
    gram_project_disk,
    quad_project_disk,
)
from bergman_content.polydomain import (
    AnnulusDomain,
    ConfocalDomain,
    MonomialLevelParams,
    boundary_points,
    diameter,
)

from conftest import random_univalent_map

PI = math.pi


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_epicycloid_formula(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(2, 9):
        for a in np.linspace(0, 1 / n, 20):
            want = math.sqrt(PI * (1 + 4 * a * a + n * a ** 4) / 2)
            worst = max(worst, rel(bergman_content(MapCoeffs.epicycloid(n, a)).content, want))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    criterion(1, "epicycloid formula", ok, f"max rel err {worst:.2e}, {dt:.2f} s")
    assert ok


def test_criterion_2_oracle_convergence(criterion):
    t0 = time.perf_counter()
    gram_err, quad_err, mono = 0.0, 0.0, []
    for m in (MapCoeffs.epicycloid(2, 0.5), MapCoeffs.epicycloid(3, 0.2)):
        want = bergman_content(m).content
        g = gram_project_disk(m, 24)
        q = quad_project_disk(m, 24)
        gram_err = max(gram_err, rel(g.residual_norm, want))
        quad_err = max(quad_err, rel(q.residual_norm, g.residual_norm))
        mono.append(rel(gram_project_disk(m, 24, basis="monomial").residual_norm, want))
    dt = time.perf_counter() - t0
    ok = gram_err <= 1e-6 and quad_err <= 1e-8 and dt < 10
    criterion(2, "Gram/quadrature oracles vs closed form", ok,
              f"gram {gram_err:.2e}, quad-vs-gram {quad_err:.2e}, {dt:.2f} s "
              f"(z^k basis for reference: {mono[0]:.1e}, {mono[1]:.1e})")
    assert ok


def test_criterion_3_content_equals_torsion(criterion):
    t0 = time.perf_counter()
    cases = [("disk R=1", MapCoeffs((1,)), 1.0), ("disk R=0.5", MapCoeffs((0.5,)), 0.5),
             ("disk R=2", MapCoeffs((2,)), 2.0), ("cardioid", MapCoeffs.epicycloid(2, 0.5), None),
             ("n=3 a=0.25", MapCoeffs.epicycloid(3, 0.25), None)]
    details, ok = [], True
    for name, m, R in cases:
        h = diameter(boundary_points(m, 1024)) / 400
        rho = fd_torsion(m, h).rho
        err = rel(rho, bergman_content(m).content ** 2)
        ok &= err <= 2e-2
        if R is not None:
            ok &= rel(rho, PI * R ** 4 / 2) <= 1e-2
        details.append(f"{name} {err:.2%}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    criterion(3, "content^2 = FD torsion", ok, ", ".join(details) + f", {dt:.1f} s")
    assert ok


def test_criterion_4_annulus(criterion):
    worst_g = worst_gap = 0.0
    strict = True
    for r, R in ((1, 2), (0.5, 1), (1, 1.1)):
        d = AnnulusDomain(r, R)
        cf = annulus_closedforms(d)
        g = gram_project_annulus(d, -4, 4)
        worst_g = max(worst_g, rel(g.residual_norm ** 2, cf.content_sq))
        strict &= cf.content_sq < PI / 2 * (R ** 4 - r ** 4)
        worst_gap = max(worst_gap, rel(cf.gap, PI / 2 * (R * R - r * r) ** 2 / math.log(R / r)))
    ok = worst_g <= 1e-10 and strict and worst_gap <= 1e-10
    criterion(4, "annulus counterexample", ok,
              f"gram {worst_g:.2e}, strict gap {strict}, gap formula {worst_gap:.2e}")
    assert ok


def test_criterion_5_confocal(criterion):
    d = ConfocalDomain(1.2, 2.5)
    k = confocal_coeffs(d)
    eq = float(np.max(k.residuals(d)))
    g = gram_project_confocal(d, -8, 8)
    oracle = g.residual_norm ** 2
    corrected = rel(confocal_content_sq(d), oracle)
    printed = rel(confocal_content_sq(d, printed=True), oracle)
    stated = {-1: k.B / 2, 1: k.C, -3: -k.D}
    coeff = max(rel(g.coeff(deg), val) for deg, val in stated.items())
    ok = eq <= 1e-12 and corrected <= 1e-8 and printed <= 1e-8 and coeff <= 1e-8
    criterion(5, "confocal ellipses", ok,
              f"equations {eq:.1e}, corrected closed form {corrected:.1e}, "
              f"printed closed form {printed:.1e}, (B/2, C, -D) vs oracle {coeff:.1e} "
              f"(oracle gives B/2, 2C, -2D)")
    assert ok


def test_criterion_6_monomial_levels(criterion):
    eq = max(abs(monomial_radial_profile(
        MonomialLevelParams(n, monomial_critical_constant(n))).F_at_R) for n in range(3, 9))
    fig = not monomial_radial_profile(MonomialLevelParams(3, 0.5)).bounded
    rng = np.random.default_rng(2024)
    agree = 0
    for _ in range(50):
        n = int(rng.integers(3, 9))
        C = float(rng.uniform(0.2, 2.0) * monomial_critical_constant(n))
        r = np.linspace(0, 3 * (2 / (n * C)) ** (1 / (n - 2)), 100_000)
        brute = bool(np.min(C * r ** n - r * r + 1) <= 0)
        agree += monomial_radial_profile(MonomialLevelParams(n, C)).bounded == brute
    ok = eq <= 1e-10 and fig and agree == 50
    criterion(6, "monomial level domains", ok,
              f"|F(R_crit)| {eq:.1e}, (3, 0.5) unbounded {fig}, brute force {agree}/50")
    assert ok


def test_criterion_7_properties(criterion):
    worst = {"scale": 0.0, "rotate": 0.0, "orth": 0.0, "pyth": 0.0}
    monotone = True
    for seed in range(100):
        rng = np.random.default_rng(seed)
        m = random_univalent_map(rng)
        lam = bergman_content(m).content
        t = float(rng.uniform(0.1, 10))
        th = float(rng.uniform(0, 2 * PI))
        worst["scale"] = max(worst["scale"], rel(bergman_content(m.scaled(t)).content, t * t * lam))
        worst["rotate"] = max(worst["rotate"], rel(bergman_content(m.rotated(th)).content, lam))
        prev = math.inf
        for N in (2, 4, 8, 12):
            g = gram_project_disk(m, N)
            monotone &= g.residual_norm <= prev * (1 + 1e-12)
            prev = g.residual_norm
            worst["orth"] = max(worst["orth"], float(np.max(g.orthogonality_defect())))
            worst["pyth"] = max(worst["pyth"], rel(g.residual_norm ** 2 + g.projection_norm_sq,
                                                   g.zbar_norm_sq))
    ok = (worst["scale"] <= 1e-12 and worst["rotate"] <= 1e-12 and monotone
          and worst["orth"] <= 1e-8 and worst["pyth"] <= 1e-10)
    criterion(7, "property suites (100 seeds)", ok,
              f"scale {worst['scale']:.1e}, rotation {worst['rotate']:.1e}, monotone {monotone}, "
              f"orthogonality {worst['orth']:.1e}, Pythagoras {worst['pyth']:.1e}")
    assert ok
