"""Exception hierarchy for wavecone.

Three families map onto the CLI exit-code contract:

- SpecError: the input could not be parsed or addressed (exit 2)
- PreconditionError: a mathematical precondition fails (exit 3)
- HypothesisError: an experiment's hypothesis gate fails (exit 4)
"""

from __future__ import annotations


class WaveconeError(Exception):
    """Base class for every error raised by wavecone."""

    exit_code: int = 1


class SpecError(WaveconeError):
    """Malformed operator spec, reference, config or field file."""

    exit_code = 2


class DimensionError(SpecError, ValueError):
    """Shapes of operators, frequencies or fields do not agree."""

    pass


class UnknownBuiltinError(SpecError):
    """Builtin operator name is not in the catalog."""

    pass


class PreconditionError(WaveconeError):
    """A mathematical precondition of an operation is violated."""

    exit_code = 3


class NotEllipticError(PreconditionError):
    """Operator symbol has a nontrivial kernel at some sampled frequency."""

    pass


class SymbolicBudgetError(PreconditionError):
    """Determinant/adjugate construction would exceed the size or degree budget."""

    pass


class ConstantRankError(PreconditionError):
    """Symbol rank varies where constant rank is required."""

    pass


class ParameterRangeError(PreconditionError, ValueError):
    """Numerical parameter (exponent, order, scale) lies outside its admissible range."""

    pass


class ExponentRangeError(ParameterRangeError):
    """Exponent lies outside the admissible higher-integrability window."""

    pass


class ResolutionError(PreconditionError):
    """Grid is too coarse for the requested scale or frequency."""

    pass


class MultiplierError(PreconditionError):
    """Fourier multiplier is not finite at a frequency it is applied to."""

    pass


class PerturbationDivergedError(PreconditionError):
    """Fixed-point iteration for a perturbed Laplacian system diverged."""

    def __init__(self, message: str, contraction: float, iterations: int):
        super().__init__(message)
        self.contraction = contraction
        self.iterations = iterations


class HypothesisError(WaveconeError):
    """An experiment's hypothesis gate failed."""

    exit_code = 4
    hypothesis: str = "experiment hypothesis"


class ConeViolationError(HypothesisError):
    """Polar values leave the convex cone K_eps."""

    hypothesis = "polar of the measure lies in the convex cone K_eps"


class NotCancelingError(HypothesisError):
    """Operator is not canceling or not of constant rank."""

    hypothesis = "canceling constant-rank operator of order k < d"


class KernelMembershipError(HypothesisError):
    """Laminate amplitude is not in the symbol kernel at its direction."""

    hypothesis = "laminate amplitude P lies in ker A(xi)"
