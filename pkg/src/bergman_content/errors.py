"""Exception hierarchy shared by every module of the package."""


class BergmanContentError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"


class DomainError(BergmanContentError, ValueError):
    """Parameters violate the invariants of a domain or an operation."""

    code = "domain"


class NotUnivalentError(DomainError):
    code = "not_univalent"


class NoConvergenceError(BergmanContentError, ArithmeticError):
    code = "no_convergence"


class DerivativeVanishingError(BergmanContentError, ArithmeticError):
    code = "derivative_vanishing"


class NegativeDiscriminantError(BergmanContentError, ArithmeticError):
    """The closed form produced ||zbar||^2 - ||f||^2 clearly below zero."""

    code = "negative_discriminant"


class IllConditionedGramError(BergmanContentError, ArithmeticError):
    code = "ill_conditioned_gram"


class EmptyMaskError(BergmanContentError):
    code = "empty_mask"


class SolverDivergenceError(BergmanContentError, ArithmeticError):
    code = "solver_divergence"
