"""Closed-form Bergman analytic content and torsional rigidity.

Covers polynomial-map quadrature domains, the annulus, the region between
two confocal ellipses, and the boundedness criterion for the level domains
``C Re(z^n) - |z|^2 + 1 > 0``.

Note on the projection norm: for ``p(zeta) = sum k b_k zeta^(k-1)`` the
Bergman norm over the unit disk is ``pi * sum k |b_k|^2`` because
``||zeta^(k-1)||^2 = pi / k``.  The factor ``pi`` is easy to lose when
writing the formula down; it is required for the content formula to hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, NegativeDiscriminantError
from .polydomain import AnnulusDomain, ConfocalDomain, MapCoeffs, MonomialLevelParams

__all__ = [
    "ContentBreakdown",
    "BestApproxPrimitive",
    "AnnulusClosedForms",
    "ConfocalCoeffs",
    "MonomialProfile",
    "product_coeffs",
    "zbar_norm_sq",
    "best_approx_primitive",
    "projection_norm_sq",
    "bergman_content",
    "torsional_rigidity_sc",
    "epicycloid_content",
    "annulus_closedforms",
    "confocal_coeffs",
    "confocal_zbar_norm_sq",
    "confocal_projection_norm_sq",
    "confocal_content_sq",
    "monomial_critical_constant",
    "monomial_radial_profile",
    "monomial_bounded",
]

CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class ContentBreakdown:
    zbar_norm_sq: float
    proj_norm_sq: float
    content: float
    c: np.ndarray
    b: np.ndarray

    @property
    def content_sq(self) -> float:
        return self.content ** 2


@dataclass(frozen=True)
class BestApproxPrimitive:
    """``P(zeta) = constant + sum_{k>=1} coeffs[k-1] zeta^k``.

    The best approximation to ``zbar`` is ``f = F'`` with ``F = P o phi^-1``,
    i.e. ``(f o phi) phi' = P'``.
    """

    constant: float
    coeffs: np.ndarray

    @property
    def dense(self) -> np.ndarray:
        return np.concatenate([[self.constant], self.coeffs]).astype(complex)

    @property
    def derivative_dense(self) -> np.ndarray:
        """Dense coefficients of ``p = P'`` (lowest degree first)."""
        k = np.arange(1, self.coeffs.size + 1)
        if k.size == 0:
            return np.zeros(1, dtype=complex)
        return (k * self.coeffs).astype(complex)

    def p(self, zeta):
        return npoly.polyval(zeta, self.derivative_dense)

    def best_approximation(self, map: MapCoeffs, zeta):
        """``f(phi(zeta))`` evaluated from the disk side."""
        return self.p(zeta) / map.derivative(zeta)


def product_coeffs(map: MapCoeffs) -> np.ndarray:
    """``(c_1, ..., c_{2n-1})`` with ``c_m = sum_{k+j=m+1} k a_k a_j``."""
    a = map.a
    n = a.size
    c = np.zeros(2 * n - 1, dtype=complex)
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            c[k + j - 2] += k * a[k - 1] * a[j - 1]
    return c


def zbar_norm_sq(map: MapCoeffs) -> float:
    """``int_Omega |z|^2 dA = pi sum |c_m|^2 / (m + 1)``."""
    c = product_coeffs(map)
    m = np.arange(1, c.size + 1)
    return float(math.pi * np.sum(np.abs(c) ** 2 / (m + 1)))


def best_approx_primitive(map: MapCoeffs) -> BestApproxPrimitive:
    a = map.a
    n = a.size
    b = np.zeros(n - 1, dtype=complex)
    for k in range(1, n):
        b[k - 1] = np.sum(a[k:n] * np.conj(a[:n - k]))
    return BestApproxPrimitive(0.5 * float(np.sum(np.abs(a) ** 2)), b)


def projection_norm_sq(map: MapCoeffs) -> float:
    """``int_Omega |f|^2 dA = pi sum_k k |b_k|^2``."""
    b = best_approx_primitive(map).coeffs
    k = np.arange(1, b.size + 1)
    return float(math.pi * np.sum(k * np.abs(b) ** 2))


def bergman_content(map: MapCoeffs) -> ContentBreakdown:
    """Distance from ``zbar`` to the Bergman space of ``phi(D)``."""
    zz = zbar_norm_sq(map)
    ff = projection_norm_sq(map)
    disc = zz - ff
    if disc < -CLAMP_TOL:
        raise NegativeDiscriminantError(
            f"||zbar||^2 - ||f||^2 = {disc:.3e} < 0; is the map univalent?")
    return ContentBreakdown(
        zbar_norm_sq=zz,
        proj_norm_sq=ff,
        content=math.sqrt(max(disc, 0.0)),
        c=product_coeffs(map),
        b=best_approx_primitive(map).coeffs,
    )


def torsional_rigidity_sc(map: MapCoeffs) -> float:
    # simply-connected: torsional rigidity equals the squared content
    return bergman_content(map).content ** 2


def epicycloid_content(n: int, a: float) -> float:
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    if not (0.0 <= a <= 1.0 / n):
        raise DomainError(f"a must lie in [0, 1/n] = [0, {1.0 / n}], got {a}")
    return math.sqrt(math.pi * (1 + 4 * a ** 2 + n * a ** 4) / 2)


# --------------------------------------------------------------------------
# annulus
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusClosedForms:
    best_coeff: float
    content_sq: float
    torsion: float

    @property
    def gap(self) -> float:
        return self.torsion - self.content_sq


def annulus_closedforms(domain: AnnulusDomain) -> AnnulusClosedForms:
    """Best approximation ``C/z``, squared content and torsional rigidity."""
    r, R = domain.r, domain.R
    log_ratio = math.log(R) - math.log(r)
    dsq = R * R - r * r
    zz = 0.5 * math.pi * (R ** 4 - r ** 4)
    return AnnulusClosedForms(
        best_coeff=dsq / (2 * log_ratio),
        content_sq=0.5 * math.pi * ((R ** 4 - r ** 4) - dsq * dsq / log_ratio),
        torsion=zz,
    )


# --------------------------------------------------------------------------
# confocal ellipses
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfocalCoeffs:
    """Harmonic extension ``2u = A + B log|z| + C(z^2 + zbar^2) + D(z^-2 + zbar^-2)``."""

    A: float
    B: float
    C: float
    D: float

    def residuals(self, domain: ConfocalDomain) -> np.ndarray:
        """Relative residuals of the four boundary equations."""
        r, R = domain.r, domain.R
        lhs = np.array([
            self.C * r * r + self.D / (r * r),
            self.C * R * R + self.D / (R * R),
            self.A + self.B * math.log(R),
            self.A + self.B * math.log(r),
        ])
        rhs = np.array([1.0, 1.0, R * R + 1 / (R * R), r * r + 1 / (r * r)])
        return np.abs(lhs - rhs) / np.abs(rhs)

    def pullback_coeffs(self) -> dict:
        """Laurent coefficients of ``(f o phi) phi'`` keyed by degree."""
        return {-1: self.B / 2, 1: 2 * self.C, -3: -2 * self.D}


def confocal_coeffs(domain: ConfocalDomain) -> ConfocalCoeffs:
    r, R = domain.r, domain.R
    lr, lR = math.log(r), math.log(R)
    L = lR - lr
    outer = R * R + 1 / (R * R)
    inner = r * r + 1 / (r * r)
    s = R * R + r * r
    return ConfocalCoeffs(
        A=(-lr * outer + lR * inner) / L,
        B=(outer - inner) / L,
        C=1 / s,
        D=r * r * R * R / s,
    )


def confocal_zbar_norm_sq(domain: ConfocalDomain) -> float:
    r, R = domain.r, domain.R
    return 0.5 * math.pi * (R ** 4 - r ** 4 + r ** -4 - R ** -4)


def confocal_projection_norm_sq(domain: ConfocalDomain, printed: bool = False) -> float:
    """Squared Bergman norm of the best approximation on the confocal region.

    ``(f o phi) phi' = B/(2 zeta) + 2C zeta - 2D zeta^-3``: the harmonic
    extension ``A/2 + (B/2) log zeta + C zeta^2 + D zeta^-2`` differentiated
    term by term.  ``printed=True`` drops the factor 2 on the ``C`` and ``D``
    terms, which reproduces the commonly quoted expression but is not the
    norm of the projection.
    """
    r, R = domain.r, domain.R
    k = confocal_coeffs(domain)
    s = 1.0 if printed else 4.0
    return 0.5 * math.pi * (k.B ** 2 * math.log(R / r)
                            + s * k.C ** 2 * (R ** 4 - r ** 4)
                            + s * k.D ** 2 * (r ** -4 - R ** -4))


def confocal_content_sq(domain: ConfocalDomain, printed: bool = False) -> float:
    """Squared Bergman analytic content of the region between confocal ellipses.

    With ``printed=True`` the last term is ``2(R^2 - r^2)/(R^2 + r^2)``
    instead of ``8(R^2 - r^2)/(R^2 + r^2)``; see
    :func:`confocal_projection_norm_sq`.
    """
    r, R = domain.r, domain.R
    L = math.log(R) - math.log(r)
    jump = R * R + 1 / (R * R) - r * r - 1 / (r * r)
    last = (2.0 if printed else 8.0) * (R * R - r * r) / (R * R + r * r)
    return 0.5 * math.pi * (R ** 4 - r ** 4 + r ** -4 - R ** -4 - jump * jump / L - last)


# --------------------------------------------------------------------------
# level domains C Re(z^n) - |z|^2 + 1 > 0
# --------------------------------------------------------------------------


def monomial_critical_constant(n: int) -> float:
    """Largest ``C`` for which the level domain is guaranteed a bounded component.

    ``2 (n-2)^((n-2)/2) / n^(n/2)``, read with ``0^0 = 1`` at ``n = 2``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    if n == 2:
        return 1.0
    return 2 * (n - 2) ** ((n - 2) / 2) / n ** (n / 2)


@dataclass(frozen=True)
class MonomialProfile:
    R_crit: float
    F_at_R: float
    bounded: bool


def monomial_radial_profile(params: MonomialLevelParams,
                            tol: float = 1e-12) -> MonomialProfile:
    """Minimum of ``F(r) = C r^n - r^2 + 1`` along the positive real axis.

    ``bounded`` is ``F(R_crit) <= tol``; the small absolute slack keeps the
    equality case ``C = monomial_critical_constant(n)`` on the bounded side.
    """
    n, C = params.n, params.C
    if n < 3:
        raise DomainError("radial profile needs n >= 3 (n = 2 is a conic)")
    if C <= 0:
        raise DomainError("radial profile needs C > 0")
    R = (2.0 / (n * C)) ** (1.0 / (n - 2))
    F = C * R ** n - R * R + 1.0
    return MonomialProfile(R_crit=R, F_at_R=F, bounded=bool(F <= tol))


def monomial_bounded(params: MonomialLevelParams) -> bool:
    """Whether the component of the level domain containing 0 is bounded."""
    if params.C == 0:
        return True
    if params.n == 2:
        return params.C < 1.0
    return monomial_radial_profile(params).bounded
