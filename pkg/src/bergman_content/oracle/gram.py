"""Bergman projection of ``zbar`` by exact Gram-matrix algebra.

Every inner product is pulled back to a model domain (the unit disk or a
round annulus) where monomials integrate in closed form:

    int_D      zeta^p conj(zeta)^q dA = delta_pq * pi / (p + 1)
    int_{r<|zeta|<R} ... dA           = delta_pq * 2 pi int_r^R rho^(2p+1) d rho

A function ``g`` on the physical domain is represented by its pullback
``h = (g o phi) phi'``, which is an isometry onto the Bergman space of the
model domain.  ``zbar`` itself pulls back to ``w = conj(phi) phi'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import DomainError, IllConditionedGramError
from ..polydomain import AnnulusDomain, ConfocalDomain, MapCoeffs, poly_mul

__all__ = [
    "ProjectionResult",
    "MAX_GRAM_CONDITION",
    "solve_projection",
    "disk_inner",
    "disk_basis",
    "gram_project_disk",
    "Laurent",
    "annulus_moment",
    "annulus_inner",
    "gram_project_annulus",
    "gram_project_confocal",
    "gram_project_laurent",
]

MAX_GRAM_CONDITION = 1e12
DISK_BASES = ("pullback", "monomial")


@dataclass
class ProjectionResult:
    """Orthogonal projection of ``zbar`` onto a finite basis.

    ``basis_coeffs[i]`` multiplies the basis element of label
    ``basis_degrees[i]``.  ``gram`` and ``rhs`` are the normal equations
    ``gram @ basis_coeffs = rhs`` with ``gram[k, l] = <e_l, e_k>`` and
    ``rhs[k] = <zbar, e_k>``.
    """

    basis_coeffs: np.ndarray
    residual_norm: float
    gram_condition: float
    basis_size: int
    zbar_norm_sq: float
    projection_norm_sq: float
    basis_degrees: np.ndarray
    basis: str = "pullback"
    gram: np.ndarray = field(repr=False, default=None)
    rhs: np.ndarray = field(repr=False, default=None)

    @property
    def residual_sq(self) -> float:
        return self.residual_norm ** 2

    def orthogonality_defect(self) -> np.ndarray:
        """``|<zbar - f, e_k>|`` for every basis element."""
        return np.abs(self.rhs - self.gram @ self.basis_coeffs)

    def coeff(self, degree: int) -> complex:
        idx = np.flatnonzero(self.basis_degrees == degree)
        if idx.size == 0:
            raise KeyError(degree)
        return complex(self.basis_coeffs[idx[0]])


def solve_projection(gram: np.ndarray, rhs: np.ndarray, zbar_sq: float,
                     max_condition: float = MAX_GRAM_CONDITION):
    """Solve the normal equations by Cholesky on the Jacobi-scaled Gram matrix.

    The reported condition number is that of the scaled matrix, i.e. of the
    Gram matrix of the normalized basis.  The residual is expanded as
    ``||w||^2 - 2 Re <x, rhs> + x^H G x`` so that the Pythagorean identity
    remains a genuine check on the solve.
    """
    d = np.sqrt(np.real(np.diag(gram)))
    if np.any(d <= 0):
        raise IllConditionedGramError("Gram matrix has a nonpositive diagonal")
    scaled = gram / np.outer(d, d)
    scaled = 0.5 * (scaled + scaled.conj().T)
    cond = float(np.linalg.cond(scaled))
    if not math.isfinite(cond) or cond > max_condition:
        raise IllConditionedGramError(
            f"Gram condition {cond:.3e} exceeds {max_condition:.1e}; reduce the basis size")
    y = scipy.linalg.cho_solve(scipy.linalg.cho_factor(scaled, lower=True), rhs / d)
    x = y / d
    proj_sq = float(np.real(np.vdot(x, gram @ x)))
    res_sq = zbar_sq - 2.0 * float(np.real(np.vdot(x, rhs))) + proj_sq
    return x, cond, proj_sq, math.sqrt(max(res_sq, 0.0))


# --------------------------------------------------------------------------
# unit disk
# --------------------------------------------------------------------------


def disk_inner(u, v) -> complex:
    """``int_D u conj(v) dA`` for dense polynomial coefficient arrays."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    m = min(u.size, v.size)
    return complex(np.sum(u[:m] * np.conj(v[:m]) * math.pi / np.arange(1, m + 1)))


def disk_basis(map: MapCoeffs, basis_size: int, basis: str = "pullback"):
    """Pulled-back basis polynomials ``h_k = (e_k o phi) phi'``.

    ``"pullback"``: ``h_k = zeta^k``, i.e. ``e_k = (zeta^k / phi') o phi^-1``.
    ``"monomial"``: ``e_k = z^k``, so ``h_k = phi^k phi'``.
    """
    if basis_size < 1:
        raise DomainError("basis_size must be >= 1")
    if basis not in DISK_BASES:
        raise DomainError(f"unknown basis {basis!r}; expected one of {DISK_BASES}")
    if basis == "pullback":
        return [np.eye(1, k + 1, k, dtype=complex).ravel() for k in range(basis_size)]
    phi, dphi = map.dense, map.dense_derivative
    out, power = [], np.ones(1, dtype=complex)
    for _ in range(basis_size):
        out.append(poly_mul(power, dphi))
        power = poly_mul(power, phi)
    return out


def gram_project_disk(map: MapCoeffs, basis_size: int, basis: str = "pullback",
                      max_condition: float = MAX_GRAM_CONDITION) -> ProjectionResult:
    """Project ``zbar`` onto an ``basis_size``-dimensional subspace of A^2(phi(D)).

    ``<zbar, e_k> = int conj(phi) phi' conj(h_k) = int phi' conj(phi h_k)``,
    so every entry is a finite sum of disk monomial moments.
    """
    h = disk_basis(map, basis_size, basis)
    phi, dphi = map.dense, map.dense_derivative
    n = len(h)
    gram = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(k, n):
            gram[k, l] = disk_inner(h[l], h[k])
            gram[l, k] = np.conj(gram[k, l])
    rhs = np.array([disk_inner(dphi, poly_mul(phi, hk)) for hk in h])
    w = poly_mul(phi, dphi)
    zbar_sq = disk_inner(w, w).real
    x, cond, proj_sq, res = solve_projection(gram, rhs, zbar_sq, max_condition)
    return ProjectionResult(
        basis_coeffs=x, residual_norm=res, gram_condition=cond, basis_size=n,
        zbar_norm_sq=zbar_sq, projection_norm_sq=proj_sq,
        basis_degrees=np.arange(n), basis=basis, gram=gram, rhs=rhs,
    )


# --------------------------------------------------------------------------
# round annulus and Laurent polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Laurent:
    """``sum coeffs[i] zeta^(low + i)``."""

    low: int
    coeffs: np.ndarray

    @classmethod
    def monomial(cls, degree: int, coeff: complex = 1.0) -> "Laurent":
        return cls(degree, np.array([coeff], dtype=complex))

    def __mul__(self, other: "Laurent") -> "Laurent":
        return Laurent(self.low + other.low, poly_mul(self.coeffs, other.coeffs))

    @property
    def degrees(self) -> np.ndarray:
        return self.low + np.arange(self.coeffs.size)

    def derivative(self) -> "Laurent":
        return Laurent(self.low - 1, self.coeffs * self.degrees)

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return sum(c * zeta ** int(k) for k, c in zip(self.degrees, self.coeffs))


def annulus_moment(p: int, r: float, R: float) -> float:
    """``int_{r<|z|<R} |z|^(2p) dA``."""
    if p == -1:
        return 2 * math.pi * (math.log(R) - math.log(r))
    e = 2 * p + 2
    return 2 * math.pi * (R ** e - r ** e) / e


def annulus_inner(u: Laurent, v: Laurent, r: float, R: float) -> complex:
    total = 0j
    vmap = dict(zip(v.degrees.tolist(), v.coeffs))
    for p, c in zip(u.degrees.tolist(), u.coeffs):
        if p in vmap:
            total += c * np.conj(vmap[p]) * annulus_moment(p, r, R)
    return complex(total)


def _conj_times(phi: Laurent, h: Laurent, dphi: Laurent, r: float, R: float) -> complex:
    # <conj(phi) phi', h> = int phi' conj(phi h)
    return annulus_inner(dphi, phi * h, r, R)


def gram_project_laurent(phi: Laurent, r: float, R: float, min_deg: int, max_deg: int,
                         max_condition: float = MAX_GRAM_CONDITION) -> ProjectionResult:
    """Project ``zbar`` on ``phi(annulus)`` onto pulled-back Laurent monomials.

    The basis elements ``e_k`` satisfy ``(e_k o phi) phi' = zeta^k`` for
    ``min_deg <= k <= max_deg``.  ``phi`` must be univalent on the annulus.
    """
    if min_deg > max_deg:
        raise DomainError(f"empty degree range [{min_deg}, {max_deg}]")
    dphi = phi.derivative()
    degs = np.arange(min_deg, max_deg + 1)
    h = [Laurent.monomial(int(k)) for k in degs]
    n = degs.size
    gram = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            gram[k, l] = annulus_inner(h[l], h[k], r, R)
    rhs = np.array([_conj_times(phi, hk, dphi, r, R) for hk in h])
    w = phi * dphi
    zbar_sq = annulus_inner(w, w, r, R).real
    x, cond, proj_sq, res = solve_projection(gram, rhs, zbar_sq, max_condition)
    return ProjectionResult(
        basis_coeffs=x, residual_norm=res, gram_condition=cond, basis_size=n,
        zbar_norm_sq=zbar_sq, projection_norm_sq=proj_sq,
        basis_degrees=degs, basis="laurent", gram=gram, rhs=rhs,
    )


def gram_project_annulus(domain: AnnulusDomain, min_deg: int, max_deg: int,
                         **kw) -> ProjectionResult:
    """Projection onto ``span{z^k}``; the coefficient of ``z^-1`` is the ``C`` of ``C/z``."""
    return gram_project_laurent(Laurent.monomial(1), domain.r, domain.R,
                                min_deg, max_deg, **kw)


JOUKOWSKI = Laurent(-1, np.array([1.0, 0.0, 1.0], dtype=complex))


def gram_project_confocal(domain: ConfocalDomain, min_deg: int, max_deg: int,
                          **kw) -> ProjectionResult:
    """Projection for the region between confocal ellipses.

    ``basis_coeffs`` are the Laurent coefficients of ``(f o phi) phi'`` with
    ``phi(zeta) = zeta + 1/zeta``.
    """
    if min_deg > -3 or max_deg < 1:
        raise DomainError("confocal projection needs min_deg <= -3 and max_deg >= 1")
    return gram_project_laurent(JOUKOWSKI, domain.r, domain.R, min_deg, max_deg, **kw)
