"""Exception types shared across the library."""


class DiscriminationError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(DiscriminationError):
    """An argument violates a documented precondition (bad norm, wrong plane, ...)."""


class InvalidPriors(DiscriminationError):
    """Prior probabilities are outside the domain a procedure requires."""


class DegenerateEnsemble(DiscriminationError):
    """The ensemble Bloch vector is too short to define a direction."""


class WeakSignal(DiscriminationError):
    """Both detector-difference readings are consistent with pure noise."""


class CosThetaOutOfRange(DiscriminationError):
    """A separation-angle cosine landed outside [-1, 1] beyond tolerance."""
