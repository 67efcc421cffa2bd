"""Exception types shared across the package."""


class ModframeError(Exception):
    """Base class for all package errors."""


class ShapeMismatch(ModframeError):
    """Operands live over different algebra shapes, ranks, or dimensions."""


class NotHermitian(ModframeError):
    """A matrix or algebra element violates Hermitian symmetry beyond tolerance."""


class NoConvergence(ModframeError):
    """The iterative diagonalizer exhausted its sweep budget."""


class NotPositive(ModframeError):
    """An eigenvalue below the negativity tolerance was found."""


class EmptyFrame(ModframeError):
    """A frame operation received an empty element sequence."""


class NotAFrame(ModframeError):
    """The sequence does not generate its submodule."""


class NotPartialIsometry(ModframeError):
    """V*V fails to be a projection within tolerance."""


class CountMismatch(ModframeError):
    """Two frames have different element counts."""


class VectorOutsideModule(ModframeError):
    """A vector does not lie in the stated submodule within tolerance."""


class GramMismatch(ModframeError):
    """Gram matrices differ beyond tolerance."""


class NotNormalizedTight(ModframeError):
    """A normalized tight frame was required."""


class NotRieszBasis(ModframeError):
    """A Riesz basis was required."""


class ExpansionResidualTooLarge(ModframeError):
    """A change-of-basis expansion failed to reproduce its targets."""


class ResolutionFailed(ModframeError):
    """The blocks do not sum to the identity within tolerance."""


class DimensionMismatch(ModframeError):
    """Hilbert-space frames have incompatible dimensions or counts."""


class NotABasis(ModframeError):
    """More vectors than the dimension of their span."""


class ParseError(ModframeError):
    """A JSON document does not match the expected schema."""


class VerificationFailed(ModframeError):
    """A CLI-level verification (frame check, resolution check, ...) failed."""
