"""
Exceptions raised by the bound evaluators, solvers and the psi oracle.
"""


class PsiBoundsError(Exception):
    """Base class for every error raised by psibounds."""


class DomainError(PsiBoundsError, ValueError):
    """An argument lies outside the range where a formula is defined."""


class SignatureMismatch(DomainError):
    """n_K differs from r1 + 2*r2."""


class ValidityError(DomainError):
    """A bound is evaluated below the x where it is proved."""

    def __init__(self, formula, x, validity_min_x):
        self.formula = formula
        self.x = x
        self.validity_min_x = validity_min_x
        super().__init__(f'{formula} requires x ≥ {validity_min_x:g} (got x = {x:g})')


class StrictValidationError(DomainError):
    """A profile diagnostic raised as an error in strict mode."""


class NotFundamental(DomainError):
    """The integer is not a fundamental discriminant."""


class ConvergenceError(PsiBoundsError):
    """A root solver missed its residual target."""


class NoCrossover(PsiBoundsError):
    """The main bound never dominates the rival up to the search cap."""


class LimitExceeded(PsiBoundsError):
    """A sieve or scan was asked to go beyond its memory guard."""
