"""Exception types shared across the library."""


class ModelError(Exception):
    """Base class for all model-specific failures."""


class IntegerAlpha(ModelError):
    """An alpha-type label has (numerically) integer value."""


class UnsupportedPair(ModelError):
    """Fusion requested for a pair outside the tabulated rules."""


class UnsupportedTriple(ModelError):
    """Bubble or R-symbol requested outside the tabulated data."""


class UnsupportedFamily(ModelError):
    """F-matrix requested outside the tabulated families."""


class SingularParameter(ModelError):
    """A tabulated formula is singular (denominator vanishes) at this alpha."""


class EmptyBasis(ModelError):
    """No admissible fusion tree exists for the requested leaves/charge."""


class LeakyPermutation(ModelError):
    """A braid letter or word does not preserve the leaf labeling."""


class NotBlockDiagonal(ModelError):
    """A matrix does not preserve the computational partition.

    Carries the offending off-block norm in ``norm``.
    """

    def __init__(self, norm, msg=None):
        super().__init__(msg or f"off-block norm {norm:.3e} exceeds tolerance")
        self.norm = norm


class PrecisionExhausted(ModelError):
    """Iteration left the regime where double precision tracks the recursion."""
