"""Domain error types.

Every error raised for a violated precondition or a failed numerical
contract derives from :class:`FoscError`; the CLI maps these to exit
code 2 (usage errors exit with 1).
"""


class FoscError(Exception):
    """Base class for all domain errors in this package."""


class TabulatedOutOfRange(FoscError):
    """A tabulated deformation was evaluated past the end of its table."""


class ZeroInRange(FoscError):
    """A ladder factorial crossed a zero of the deformation function."""


class NegativePartialSum(FoscError):
    """Commutator partial sums went negative; no real deformation exists."""


class DomainError(FoscError):
    """Argument outside the mathematical domain of the operation."""


class OutsideConvergenceRadius(FoscError):
    """|alpha| at or beyond the allowed fraction of the convergence radius."""


class TruncationCapExceeded(FoscError):
    """The adaptive Fock truncation would exceed the configured cap."""


class ZeroSectorMisuse(FoscError):
    """Wrong builder for the deformation kind (zero sector vs. regular)."""


class DegenerateAmplitude(FoscError):
    """Amplitude leaves no surviving term in the sector series."""


class SpecMismatch(FoscError):
    """Operation requires both states to share one deformation spec."""


class ZeroCoefficient(FoscError):
    """Coefficient inversion hit a vanishing Fock coefficient."""


class NonconvergentNormalization(FoscError):
    """Normalization series failed to converge on the given support."""


class ZeroDeformationValue(FoscError):
    """A series needs 1/f(j) at a point where f(j) = 0."""


class RealityViolation(FoscError):
    """Imaginary residue of a nominally real field exceeded its bound."""


class NonconvergentSum(FoscError):
    """Thermal sum hit its term cap or an unusable energy sequence."""


class NonpositiveBeta(FoscError):
    """Inverse temperature (or temperature) must be positive."""


class NonfiniteFrequency(FoscError):
    """A mode frequency is not finite at the initial invariants."""


class StepTooLarge(FoscError):
    """Fixed-step integration drifted beyond the invariant tolerance."""
