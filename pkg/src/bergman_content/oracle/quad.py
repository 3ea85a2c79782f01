"""Quadrature variant of the disk projection oracle.

Same normal equations as :func:`gram_project_disk`, but every inner product
is a tensor-product rule on the unit disk: Gauss-Legendre in the radius
(mapped to [0, 1], Jacobian ``rho``) times the trapezoid rule in angle.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..polydomain import MapCoeffs, poly_eval
from .gram import MAX_GRAM_CONDITION, ProjectionResult, disk_basis, solve_projection

__all__ = ["disk_rule", "quad_project_disk"]


def disk_rule(radial_nodes: int, angular_nodes: int):
    """Nodes and weights of the polar product rule on the unit disk."""
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    rho = 0.5 * (x + 1.0)
    wr = 0.5 * w * rho
    theta = 2 * math.pi * np.arange(angular_nodes) / angular_nodes
    nodes = (rho[:, None] * np.exp(1j * theta[None, :])).ravel()
    weights = np.repeat(wr, angular_nodes) * (2 * math.pi / angular_nodes)
    return nodes, weights


def quad_project_disk(map: MapCoeffs, basis_size: int, radial_nodes: int = 64,
                      angular_nodes: int = 256, basis: str = "pullback",
                      max_condition: float = MAX_GRAM_CONDITION) -> ProjectionResult:
    if radial_nodes < 8 or angular_nodes < 16:
        raise DomainError("need radial_nodes >= 8 and angular_nodes >= 16")
    zeta, wt = disk_rule(radial_nodes, angular_nodes)
    H = np.column_stack([poly_eval(hk, zeta) for hk in disk_basis(map, basis_size, basis)])
    w = np.conj(map(zeta)) * map.derivative(zeta)
    WH = wt[:, None] * H
    gram = WH.conj().T @ H  # gram[k, l] = <e_l, e_k>
    rhs = WH.conj().T @ w
    zbar_sq = float(np.sum(wt * np.abs(w) ** 2))
    x, cond, proj_sq, res = solve_projection(gram, rhs, zbar_sq, max_condition)
    return ProjectionResult(
        basis_coeffs=x, residual_norm=res, gram_condition=cond, basis_size=H.shape[1],
        zbar_norm_sq=zbar_sq, projection_norm_sq=proj_sq,
        basis_degrees=np.arange(H.shape[1]), basis=basis, gram=gram, rhs=rhs,
    )
