import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_content import closedform as cf
from bergman_content.closedform import (
    annulus_closedforms,
    bergman_content,
    best_approx_primitive,
    confocal_coeffs,
    confocal_content_sq,
    confocal_projection_norm_sq,
    confocal_zbar_norm_sq,
    epicycloid_content,
    monomial_bounded,
    monomial_critical_constant,
    monomial_radial_profile,
    product_coeffs,
    projection_norm_sq,
    torsional_rigidity_sc,
    zbar_norm_sq,
)
from bergman_content.errors import DomainError, NegativeDiscriminantError
from bergman_content.oracle import gram_project_confocal, gram_project_disk
from bergman_content.oracle.quad import disk_rule
from bergman_content.polydomain import (
    AnnulusDomain,
    ConfocalDomain,
    MapCoeffs,
    MonomialLevelParams,
    poly_mul,
)

from conftest import random_univalent_map

PI = math.pi
CARDIOID = MapCoeffs((1, 0.5))


def rel(a, b):
    return abs(a - b) / abs(b)


def quad_zbar_norm_sq(m):
    zeta, w = disk_rule(64, 256)
    return float(np.sum(w * np.abs(m(zeta) * m.derivative(zeta)) ** 2))


class TestProductCoeffs:
    def test_identity(self):
        np.testing.assert_allclose(product_coeffs(MapCoeffs((1,))), [1])

    @pytest.mark.parametrize("n,a", [(2, 0.5), (3, 0.2), (5, -0.1), (4, 0.25)])
    def test_epicycloid(self, n, a):
        c = product_coeffs(MapCoeffs.epicycloid(n, a))
        want = np.zeros(2 * n - 1)
        want[0] = 1
        want[n - 1] += (n + 1) * a
        want[2 * n - 2] += n * a * a
        np.testing.assert_allclose(c, want, atol=1e-15)

    def test_cardioid(self):
        np.testing.assert_allclose(product_coeffs(CARDIOID), [1, 1.5, 0.5])

    def test_matches_convolution(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = random_univalent_map(rng)
            conv = poly_mul(m.dense, m.dense_derivative)
            np.testing.assert_allclose(product_coeffs(m), conv[1:2 * m.degree], atol=1e-14)


class TestZbarNorm:
    def test_disk(self):
        assert zbar_norm_sq(MapCoeffs((1,))) == pytest.approx(PI / 2, rel=1e-15)

    def test_scaling(self):
        assert zbar_norm_sq(MapCoeffs((3,))) == pytest.approx(PI * 81 / 2, rel=1e-14)

    def test_cusped(self):
        m = MapCoeffs((1, 0, 0, 0.25))
        assert zbar_norm_sq(m) == pytest.approx(PI * 105 / 128, rel=1e-14)
        assert quad_zbar_norm_sq(m) == pytest.approx(PI * 105 / 128, rel=1e-12)

    def test_matches_quadrature(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            m = random_univalent_map(rng)
            assert zbar_norm_sq(m) == pytest.approx(quad_zbar_norm_sq(m), rel=1e-12)


class TestPrimitive:
    def test_disk(self):
        P = best_approx_primitive(MapCoeffs((1,)))
        assert P.constant == 0.5 and P.coeffs.size == 0
        assert np.all(P.p(np.array([0.1, 0.5j])) == 0)

    @pytest.mark.parametrize("n,a", [(2, 0.3), (4, 0.25), (6, 0.1)])
    def test_epicycloid(self, n, a):
        P = best_approx_primitive(MapCoeffs.epicycloid(n, a))
        assert P.constant == pytest.approx((1 + a * a) / 2, rel=1e-14)
        want = np.zeros(n - 1)
        want[n - 2] = a
        np.testing.assert_allclose(P.coeffs, want, atol=1e-15)

    def test_cardioid_against_gram(self):
        P = best_approx_primitive(CARDIOID)
        assert P.constant == pytest.approx(5 / 8)
        np.testing.assert_allclose(P.coeffs, [0.5])
        # pulled-back Gram coefficients are those of p = P'
        g = gram_project_disk(CARDIOID, 6)
        np.testing.assert_allclose(g.basis_coeffs, np.pad(P.derivative_dense, (0, 5)), atol=1e-14)

    def test_random_against_gram(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            m = random_univalent_map(rng)
            P = best_approx_primitive(m)
            assert P.coeffs.size == m.degree - 1
            assert P.constant == pytest.approx(0.5 * np.sum(np.abs(m.a) ** 2), rel=1e-14)
            g = gram_project_disk(m, m.degree + 3)
            want = np.zeros(m.degree + 3, complex)
            want[:max(m.degree - 1, 1)] = P.derivative_dense
            np.testing.assert_allclose(g.basis_coeffs, want, atol=1e-12)

    def test_best_approximation_is_p_over_dphi(self):
        P = best_approx_primitive(CARDIOID)
        zeta = np.array([0.2, -0.3 + 0.1j])
        np.testing.assert_allclose(P.best_approximation(CARDIOID, zeta), 0.5 / (1 + zeta))


class TestProjectionNorm:
    def test_disk(self):
        assert projection_norm_sq(MapCoeffs((2 - 1j,))) == 0

    @pytest.mark.parametrize("n,a", [(2, 0.5), (3, 0.2), (7, 0.1)])
    def test_epicycloid(self, n, a):
        assert projection_norm_sq(MapCoeffs.epicycloid(n, a)) == pytest.approx(PI * (n - 1) * a * a)

    def test_cardioid_against_gram(self):
        assert projection_norm_sq(CARDIOID) == pytest.approx(PI / 4, rel=1e-15)
        assert gram_project_disk(CARDIOID, 8).projection_norm_sq == pytest.approx(PI / 4, rel=1e-13)


class TestContent:
    def test_disk(self):
        br = bergman_content(MapCoeffs((1,)))
        assert br.content == pytest.approx(math.sqrt(PI / 2), rel=1e-15)
        assert br.proj_norm_sq == 0

    def test_cardioid(self):
        assert bergman_content(CARDIOID).content == pytest.approx(math.sqrt(17 * PI / 16), rel=1e-14)

    def test_breakdown_fields(self):
        br = bergman_content(MapCoeffs((1, 0, 0.2)))
        assert br.content ** 2 == pytest.approx(br.zbar_norm_sq - br.proj_norm_sq, rel=1e-12)
        assert br.proj_norm_sq <= br.zbar_norm_sq
        assert br.c.size == 5 and br.b.size == 2

    def test_negative_discriminant(self, monkeypatch):
        monkeypatch.setattr(cf, "projection_norm_sq", lambda m: zbar_norm_sq(m) + 1e-6)
        with pytest.raises(NegativeDiscriminantError):
            cf.bergman_content(CARDIOID)

    def test_tiny_negative_is_clamped(self, monkeypatch):
        monkeypatch.setattr(cf, "projection_norm_sq", lambda m: zbar_norm_sq(m) + 1e-11)
        assert cf.bergman_content(CARDIOID).content == 0.0

    def test_discriminant_is_bessel(self):
        # p is the disk projection of conj(phi) phi', so the gap is >= 0 for any map
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = rng.normal(size=5) + 1j * rng.normal(size=5)
            m = MapCoeffs(tuple(a))
            assert zbar_norm_sq(m) >= projection_norm_sq(m)


class TestTorsionSC:
    def test_disk(self):
        for R in (0.5, 1.0, 2.0):
            assert torsional_rigidity_sc(MapCoeffs((R,))) == pytest.approx(PI * R ** 4 / 2)

    def test_cardioid(self):
        assert torsional_rigidity_sc(CARDIOID) == pytest.approx(17 * PI / 16)

    def test_cusped(self):
        assert torsional_rigidity_sc(MapCoeffs((1, 0, 0, 0.25))) == pytest.approx(81 * PI / 128)


class TestEpicycloid:
    def test_values(self):
        assert epicycloid_content(2, 0) == pytest.approx(math.sqrt(PI / 2))
        assert epicycloid_content(2, 0.5) == pytest.approx(math.sqrt(17 * PI / 16))
        assert epicycloid_content(4, 0.25) == pytest.approx(math.sqrt(81 * PI / 128))

    @pytest.mark.parametrize("n,a", [(2, -0.1), (2, 0.51), (4, 0.3), (1, 0.0)])
    def test_domain_errors(self, n, a):
        with pytest.raises(DomainError):
            epicycloid_content(n, a)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_agrees_with_general_formula(self, n):
        for a in np.linspace(0, 1 / n, 20):
            want = epicycloid_content(n, a)
            assert rel(bergman_content(MapCoeffs.epicycloid(n, a)).content, want) <= 1e-12


class TestInvariants:
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_consistency_and_bounds(self, seed):
        m = random_univalent_map(np.random.default_rng(seed))
        br = bergman_content(m)
        assert rel(br.content ** 2 + projection_norm_sq(m), zbar_norm_sq(m)) <= 1e-12
        assert 0 <= br.proj_norm_sq <= br.zbar_norm_sq

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(0.1, 10.0))
    def test_scaling_law(self, seed, t):
        m = random_univalent_map(np.random.default_rng(seed))
        assert rel(bergman_content(m.scaled(t)).content, t * t * bergman_content(m).content) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(0, 2 * math.pi))
    def test_rotation_invariance(self, seed, theta):
        m = random_univalent_map(np.random.default_rng(seed))
        assert rel(bergman_content(m.rotated(theta)).content, bergman_content(m).content) <= 1e-12

    def test_disk_characterization(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            m = random_univalent_map(rng)
            assert (projection_norm_sq(m) == 0) == (m.degree == 1)


class TestAnnulus:
    def test_one_two(self):
        out = annulus_closedforms(AnnulusDomain(1, 2))
        assert out.best_coeff == pytest.approx(3 / (2 * math.log(2)), rel=1e-15)
        assert out.best_coeff == pytest.approx(2.1640, abs=1e-4)
        assert out.content_sq == pytest.approx(PI / 2 * (15 - 9 / math.log(2)), rel=1e-14)
        assert out.content_sq == pytest.approx(3.16632, abs=1e-5)
        assert out.torsion == pytest.approx(15 * PI / 2, rel=1e-15)
        assert out.gap == pytest.approx(20.3956, abs=1e-4)

    def test_small_hole_limit(self):
        # deviation from the disk value decays like (pi/2) / log(1/r)
        for r in (1e-6, 1e-12, 1e-100):
            dev = PI / 2 - annulus_closedforms(AnnulusDomain(r, 1.0)).content_sq
            assert dev > 0
            assert dev == pytest.approx(PI / 2 / math.log(1 / r), rel=1e-10)

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            annulus_closedforms(AnnulusDomain(1, 1))

    @given(st.floats(1e-3, 10), st.floats(1.0001, 20))
    def test_counterexample(self, r, ratio):
        out = annulus_closedforms(AnnulusDomain(r, r * ratio))
        R = r * ratio
        assert out.content_sq < out.torsion
        gap = PI / 2 * (R * R - r * r) ** 2 / math.log(R / r)
        assert out.gap == pytest.approx(gap, rel=1e-9)


ELLIPSES = ConfocalDomain(1.2, 2.5)


class TestConfocal:
    def test_coeffs(self):
        k = confocal_coeffs(ELLIPSES)
        assert k.C == pytest.approx(1 / 7.69, rel=1e-15)
        assert k.C == pytest.approx(0.13003, abs=1e-5)
        assert k.D == pytest.approx(1.44 * 6.25 / 7.69, rel=1e-15)
        assert k.D == pytest.approx(1.17035, abs=1e-5)
        assert k.B == pytest.approx((6.41 - 1.44 - 1 / 1.44) / math.log(2.5 / 1.2), rel=1e-14)
        assert k.B == pytest.approx(5.82525, abs=1e-5)
        assert np.all(k.residuals(ELLIPSES) <= 1e-12)

    @given(st.floats(1.01, 5), st.floats(1.001, 5))
    def test_linear_system(self, r, ratio):
        d = ConfocalDomain(r, r * ratio)
        k = confocal_coeffs(d)
        assert np.all(k.residuals(d) <= 1e-12)
        R = r * ratio
        M = np.array([[0, 0, r * r, r ** -2],
                      [0, 0, R * R, R ** -2],
                      [1, math.log(R), 0, 0],
                      [1, math.log(r), 0, 0]])
        rhs = np.array([1, 1, R * R + R ** -2, r * r + r ** -2])
        np.testing.assert_allclose([k.A, k.B, k.C, k.D], np.linalg.solve(M, rhs), rtol=1e-8)

    def test_regression_constant(self):
        # frozen from gram_project_confocal(ELLIPSES, -8, 8)
        assert confocal_content_sq(ELLIPSES) == pytest.approx(11.83667679742635, rel=1e-13)
        g = gram_project_confocal(ELLIPSES, -8, 8)
        assert g.residual_norm ** 2 == pytest.approx(11.83667679742635, rel=1e-12)

    def test_consistency(self):
        zz = confocal_zbar_norm_sq(ELLIPSES)
        for printed in (False, True):
            assert rel(confocal_content_sq(ELLIPSES, printed),
                       zz - confocal_projection_norm_sq(ELLIPSES, printed)) <= 1e-12
        k = confocal_coeffs(ELLIPSES)
        r, R = ELLIPSES.r, ELLIPSES.R
        printed = PI / 2 * (R ** 4 - r ** 4 + r ** -4 - R ** -4) - PI / 2 * (
            k.B ** 2 * math.log(R / r) + k.C ** 2 * (R ** 4 - r ** 4) + k.D ** 2 * (r ** -4 - R ** -4))
        assert rel(confocal_content_sq(ELLIPSES, printed=True), printed) <= 1e-12

    def test_pullback_coeffs_match_gram(self):
        g = gram_project_confocal(ELLIPSES, -8, 8)
        for deg, val in confocal_coeffs(ELLIPSES).pullback_coeffs().items():
            assert g.coeff(deg) == pytest.approx(val, rel=1e-12)

    def test_printed_value_is_not_a_distance(self):
        """Least squares in the physical plane beats the printed value."""
        r, R = ELLIPSES.r, ELLIPSES.R
        x, w = np.polynomial.legendre.leggauss(120)
        rho = r + (R - r) * (x + 1) / 2
        th = 2 * PI * np.arange(256) / 256
        zeta = (rho[:, None] * np.exp(1j * th[None, :])).ravel()
        wt = np.repeat(w * (R - r) / 2 * rho, 256) * (2 * PI / 256)
        z = zeta + 1 / zeta
        wt = wt * np.abs(1 - zeta ** -2) ** 2
        K = 12
        A = np.sqrt(wt)[:, None] * np.column_stack([z ** k for k in range(-K, K + 1)])
        A /= np.linalg.norm(A, axis=0)
        b = np.sqrt(wt) * np.conj(z)
        Q, _ = np.linalg.qr(A)
        res = b - Q @ (Q.conj().T @ b)
        dist_sq = float(np.sum(np.abs(res) ** 2))
        assert dist_sq < confocal_content_sq(ELLIPSES, printed=True)
        assert dist_sq > confocal_content_sq(ELLIPSES)

    def test_thin_limit(self):
        d = ConfocalDomain(1.2, 1.201)
        assert abs(confocal_content_sq(d)) <= 1e-4
        assert confocal_content_sq(d) > 0

    def test_large_annulus_limit(self):
        got = confocal_content_sq(ConfocalDomain(50, 100))
        want = annulus_closedforms(AnnulusDomain(50, 100)).content_sq
        assert rel(got, want) <= 1e-3

    def test_invalid(self):
        with pytest.raises(DomainError):
            confocal_content_sq(ConfocalDomain(0.9, 2))


class TestMonomial:
    def test_constants(self):
        assert monomial_critical_constant(2) == 1.0
        assert monomial_critical_constant(3) == pytest.approx(2 / (3 * math.sqrt(3)), rel=1e-15)
        assert monomial_critical_constant(3) == pytest.approx(0.38490, abs=1e-5)
        assert monomial_critical_constant(4) == pytest.approx(0.25, rel=1e-15)
        with pytest.raises(DomainError):
            monomial_critical_constant(1)

    def test_three_half_unbounded(self):
        assert not monomial_radial_profile(MonomialLevelParams(3, 0.5)).bounded

    def test_just_below(self):
        prof = monomial_radial_profile(MonomialLevelParams(3, 0.38))
        assert prof.bounded and prof.F_at_R <= 0

    @pytest.mark.parametrize("n", range(3, 9))
    def test_equality_case(self, n):
        prof = monomial_radial_profile(MonomialLevelParams(n, monomial_critical_constant(n)))
        assert abs(prof.F_at_R) <= 1e-10
        assert prof.bounded

    def test_profile_domain_errors(self):
        with pytest.raises(DomainError):
            monomial_radial_profile(MonomialLevelParams(2, 0.5))
        with pytest.raises(DomainError):
            monomial_radial_profile(MonomialLevelParams(3, 0.0))

    def test_conic_case(self):
        assert monomial_bounded(MonomialLevelParams(2, 0.99))
        assert not monomial_bounded(MonomialLevelParams(2, 1.0))
        assert monomial_bounded(MonomialLevelParams(5, 0.0))

    def test_matches_grid_minimum(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(3, 9))
            C = float(rng.uniform(0.5, 1.5) * monomial_critical_constant(n))
            r = np.linspace(0, 3 * (2 / (n * C)) ** (1 / (n - 2)), 100_000)
            brute = np.min(C * r ** n - r * r + 1) <= 0
            assert monomial_radial_profile(MonomialLevelParams(n, C)).bounded == brute
