"""Bergman analytic content and torsional rigidity of planar domains."""

from .closedform import (
    annulus_closedforms,
    bergman_content,
    best_approx_primitive,
    confocal_coeffs,
    confocal_content_sq,
    epicycloid_content,
    monomial_bounded,
    monomial_critical_constant,
    monomial_radial_profile,
    product_coeffs,
    projection_norm_sq,
    torsional_rigidity_sc,
    zbar_norm_sq,
)
from .errors import BergmanContentError, DomainError
from .polydomain import (
    AnnulusDomain,
    ConfocalDomain,
    MapCoeffs,
    MonomialLevelParams,
    PolyMapDomain,
    boundary_points,
    invert_map,
    poly_mul,
)

__version__ = "0.1.0"
