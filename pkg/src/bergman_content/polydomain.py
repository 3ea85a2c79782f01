"""Polynomial conformal maps, domain descriptors and boundary geometry.

Coefficient sequences are dense numpy arrays, lowest degree first, so that
index 0 always holds the constant term.  ``MapCoeffs`` keeps the 1-based
coefficients ``a_1, ..., a_n`` of ``phi(z) = sum a_k z^k`` and exposes the
dense form through :attr:`MapCoeffs.dense`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DerivativeVanishingError,
    DomainError,
    NoConvergenceError,
    NotUnivalentError,
)

__all__ = [
    "MapCoeffs",
    "PolyMapDomain",
    "AnnulusDomain",
    "ConfocalDomain",
    "MonomialLevelParams",
    "poly_mul",
    "poly_der",
    "poly_eval",
    "boundary_points",
    "invert_map",
    "winding_numbers",
    "grid_winding_numbers",
    "row_crossings",
    "polygon_is_simple",
    "check_univalence",
    "diameter",
]


# --------------------------------------------------------------------------
# dense polynomial arithmetic
# --------------------------------------------------------------------------


def poly_mul(p: Sequence[complex], q: Sequence[complex]) -> np.ndarray:
    """Cauchy product of two dense coefficient sequences.

    ``len(result) == len(p) + len(q) - 1``; an empty factor gives an empty
    product.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if p.size == 0 or q.size == 0:
        return np.zeros(0, dtype=complex)
    return np.convolve(p, q)


def poly_der(p: Sequence[complex]) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    if p.size <= 1:
        return np.zeros(1, dtype=complex)
    return p[1:] * np.arange(1, p.size)


def poly_eval(p: Sequence[complex], z):
    """Evaluate a dense (lowest degree first) polynomial at ``z``."""
    return npoly.polyval(z, np.asarray(p, dtype=complex))


# --------------------------------------------------------------------------
# domain descriptors
# --------------------------------------------------------------------------


def _as_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise DomainError(f"complex coefficient must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


@dataclass(frozen=True)
class MapCoeffs:
    """Polynomial conformal map ``phi(z) = a_1 z + ... + a_n z^n``.

    ``coeffs[k - 1]`` is ``a_k``.  There is no constant term, so
    ``phi(0) = 0``.
    """

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_as_complex(c) for c in self.coeffs)
        if not coeffs:
            raise DomainError("map needs at least one coefficient")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise DomainError("map coefficients must be finite")
        if coeffs[0] == 0:
            raise DomainError("a_1 must be nonzero (phi'(0) != 0)")
        if coeffs[-1] == 0:
            raise DomainError("leading coefficient a_n must be nonzero")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def epicycloid(cls, n: int, a: float) -> "MapCoeffs":
        """``z + a z^n``; collapses to the identity map when ``a == 0``."""
        if n < 2:
            raise DomainError("epicycloid needs n >= 2")
        if a == 0:
            return cls((1.0,))
        return cls((1.0,) + (0.0,) * (n - 2) + (a,))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def a(self) -> np.ndarray:
        """``a_1..a_n`` as a complex array (0-based: ``a[k-1] = a_k``)."""
        return np.array(self.coeffs, dtype=complex)

    @property
    def dense(self) -> np.ndarray:
        return np.concatenate([[0.0], self.a]).astype(complex)

    @property
    def dense_derivative(self) -> np.ndarray:
        return poly_der(self.dense)

    def __call__(self, z):
        return poly_eval(self.dense, z)

    def derivative(self, z):
        return poly_eval(self.dense_derivative, z)

    def scaled(self, t: complex) -> "MapCoeffs":
        """The map ``t * phi``."""
        return MapCoeffs(tuple(t * c for c in self.coeffs))

    def rotated(self, theta: float) -> "MapCoeffs":
        return self.scaled(complex(math.cos(theta), math.sin(theta)))

    def critical_points(self) -> np.ndarray:
        """Zeros of ``phi'``."""
        d = self.dense_derivative
        if d.size <= 1:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(d)


@dataclass(frozen=True)
class PolyMapDomain:
    """Simply-connected one-point quadrature domain ``phi(D)``."""

    map: MapCoeffs
    univalence_checked: bool = False

    @classmethod
    def checked(cls, map: MapCoeffs, samples: int = 720) -> "PolyMapDomain":
        """Run the univalence heuristic and raise if it fails."""
        if not check_univalence(map, samples):
            raise NotUnivalentError(
                f"map {map.coeffs} failed the univalence heuristic")
        return cls(map, True)


@dataclass(frozen=True)
class AnnulusDomain:
    r: float
    R: float

    def __post_init__(self):
        if not (0 < self.r < self.R) or not math.isfinite(self.R):
            raise DomainError(f"annulus needs 0 < r < R, got r={self.r}, R={self.R}")


@dataclass(frozen=True)
class ConfocalDomain:
    """Image of ``r < |zeta| < R`` under ``zeta + 1/zeta``."""

    r: float
    R: float

    def __post_init__(self):
        if not (1 < self.r < self.R) or not math.isfinite(self.R):
            raise DomainError(f"confocal domain needs 1 < r < R, got r={self.r}, R={self.R}")

    def map(self, zeta):
        return zeta + 1.0 / zeta


@dataclass(frozen=True)
class MonomialLevelParams:
    """Level domain ``C Re(z^n) - |z|^2 + 1 > 0``."""

    n: int
    C: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        if not (self.C >= 0) or not math.isfinite(self.C):
            raise DomainError(f"C must be a finite nonnegative real, got {self.C}")


# --------------------------------------------------------------------------
# boundary sampling and map inversion
# --------------------------------------------------------------------------


def _map_of(domain) -> MapCoeffs:
    return domain.map if isinstance(domain, PolyMapDomain) else domain


def boundary_points(domain, M: int) -> np.ndarray:
    """``phi(exp(2 pi i k / M))`` for ``k = 0..M-1``."""
    if M < 3:
        raise DomainError("need at least 3 boundary samples")
    phi = _map_of(domain)
    t = np.exp(2j * np.pi * np.arange(M) / M)
    return phi(t)


def _newton(phi: MapCoeffs, z: complex, zeta: complex, maxiter: int, tol: float) -> complex:
    target = tol * (1.0 + abs(z))
    for _ in range(maxiter):
        res = phi(zeta) - z
        if abs(res) <= target:
            return zeta
        d = phi.derivative(zeta)
        if abs(d) < 1e-14:
            raise DerivativeVanishingError(f"phi'(zeta) vanished at zeta={zeta!r}")
        zeta = zeta - res / d
    if abs(phi(zeta) - z) <= target:
        return zeta
    raise NoConvergenceError(f"Newton did not converge in {maxiter} steps for z={z!r}")


def _grid_seed(phi: MapCoeffs, z: complex) -> complex:
    rho = np.linspace(0.0, 0.98, 25)
    theta = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    grid = (rho[:, None] * np.exp(1j * theta[None, :])).ravel()
    return complex(grid[np.argmin(np.abs(phi(grid) - z))])


def invert_map(map: MapCoeffs, z: complex, seed: complex | None = None, *,
               maxiter: int = 100, tol: float = 1e-12) -> complex:
    """Solve ``phi(zeta) = z`` for ``zeta`` in the unit disk by Newton iteration.

    The default seed is ``z / a_1``.  When Newton stalls, or lands outside the
    closed disk, the iteration is restarted once from the best point of a
    coarse polar grid.
    """
    z = complex(z)
    if seed is None:
        seed = z / map.coeffs[0]
    try:
        zeta = _newton(map, z, complex(seed), maxiter, tol)
        if abs(zeta) <= 1.0 + 1e-12:
            return zeta
    except (NoConvergenceError, DerivativeVanishingError):
        pass
    zeta = _newton(map, z, _grid_seed(map, z), maxiter, tol)
    if abs(zeta) > 1.0 + 1e-12:
        raise NoConvergenceError(f"no preimage of {z!r} found in the unit disk")
    return zeta


# --------------------------------------------------------------------------
# polygon geometry
# --------------------------------------------------------------------------


def _edges(polygon):
    v0 = np.asarray(polygon, dtype=complex)
    v1 = np.roll(v0, -1)
    return v0, v1


def winding_numbers(polygon: Sequence[complex], points: Iterable[complex],
                    chunk: int = 512) -> np.ndarray:
    """Winding number of a closed polygon about each point (signed crossings)."""
    v0, v1 = _edges(polygon)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(pts.size, dtype=int)
    x0, y0, x1, y1 = v0.real, v0.imag, v1.real, v1.imag
    for s in range(0, pts.size, chunk):
        p = pts[s:s + chunk, None]
        px, py = p.real, p.imag
        side = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        up = (y0 <= py) & (y1 > py) & (side > 0)
        down = (y0 > py) & (y1 <= py) & (side < 0)
        out[s:s + chunk] = up.sum(axis=1) - down.sum(axis=1)
    return out


def row_crossings(polygon: Sequence[complex], ys: Sequence[float]):
    """Crossings of each horizontal line ``y = ys[j]`` with the polygon.

    Returns a list of ``(x_intercepts, directions)`` pairs sorted by
    intercept; direction is +1 for upward edges and -1 for downward ones.
    """
    v0, v1 = _edges(polygon)
    x0, y0, x1, y1 = v0.real, v0.imag, v1.real, v1.imag
    dy = y1 - y0
    out = []
    for y in np.asarray(ys, dtype=float):
        up = (y0 <= y) & (y1 > y)
        down = (y0 > y) & (y1 <= y)
        m = up | down
        xi = x0[m] + (y - y0[m]) * (x1[m] - x0[m]) / dy[m]
        d = np.where(up[m], 1, -1)
        order = np.argsort(xi, kind="stable")
        out.append((xi[order], d[order]))
    return out


def grid_winding_numbers(polygon: Sequence[complex], xs: Sequence[float],
                         ys: Sequence[float]) -> np.ndarray:
    """Winding numbers on the tensor grid ``xs x ys``; shape ``(len(ys), len(xs))``.

    Scanline form of the crossing rule: on each row the winding number at
    ``x`` is the signed count of crossings strictly to the right of ``x``.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.zeros((len(ys), xs.size), dtype=int)
    for j, (xi, d) in enumerate(row_crossings(polygon, ys)):
        if xi.size == 0:
            continue
        suffix = np.concatenate([np.cumsum(d[::-1])[::-1], [0]])
        out[j] = suffix[np.searchsorted(xi, xs, side="right")]
    return out


def polygon_is_simple(polygon: Sequence[complex], chunk: int = 256) -> bool:
    """True when no two non-adjacent edges of the closed polygon intersect."""
    v0, v1 = _edges(polygon)
    M = v0.size

    def orient(a, b, c):
        return np.sign(((b - a).conjugate() * (c - a)).imag)

    idx = np.arange(M)
    for s in range(0, M, chunk):
        i = idx[s:s + chunk, None]
        a, b = v0[i], v1[i]
        c, d = v0[None, :], v1[None, :]
        o1, o2 = orient(a, b, c), orient(a, b, d)
        o3, o4 = orient(c, d, a), orient(c, d, b)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        gap = (idx[None, :] - i) % M
        hit &= (gap > 1) & (gap < M - 1)
        if hit.any():
            return False
    return True


def check_univalence(map: MapCoeffs, samples: int = 720) -> bool:
    """Heuristic univalence test for a polynomial map on the unit disk.

    Passes when ``phi'`` has no zero inside the open disk, the sampled
    boundary polygon is simple, and it winds once around images of interior
    probe points.
    """
    crit = map.critical_points()
    if crit.size and np.min(np.abs(crit)) < 1.0 - 1e-12:
        return False
    poly = boundary_points(map, samples)
    if not polygon_is_simple(poly):
        return False
    rho = np.array([0.0, 0.25, 0.5, 0.75, 0.9])
    theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    probes = map((rho[:, None] * np.exp(1j * theta[None, :])).ravel())
    return bool(np.all(winding_numbers(poly, probes) == 1))


def diameter(points: Sequence[complex]) -> float:
    pts = np.asarray(points, dtype=complex)
    best = 0.0
    for s in range(0, pts.size, 1024):
        best = max(best, float(np.max(np.abs(pts[s:s + 1024, None] - pts[None, :]))))
    return best
