"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`KernApproxError`, so callers (and the CLI) can catch one type.
"""


class KernApproxError(Exception):
    """Base class for all package errors."""


class SpecError(KernApproxError, ValueError):
    """Malformed or invalid kernel specification."""


class MixedPhase(SpecError):
    """The spec mixes phases, so no single coefficient sequence exists."""


class JumpPoint(KernApproxError, ValueError):
    """A Bernoulli r=1 term was evaluated at its jump t = 0 (mod 2pi)."""


class ZeroDenominator(KernApproxError, ZeroDivisionError):
    """A ratio of coefficient values hit psi(k) = 0."""


class Inconclusive(KernApproxError):
    """A numerical bound could not be established within the scan window."""


class SingularSystem(KernApproxError, ValueError):
    """Collocation matrix is numerically singular."""


class DegreeTooHigh(KernApproxError, ValueError):
    """Polynomial degree is not below n."""


class NoRootBracketed(KernApproxError):
    """Phase equation has no sign change at scan resolution."""


class NonIntegerBeta(KernApproxError, ValueError):
    """Integer-beta closed form requested for a non-integer beta."""


class DimensionMismatch(KernApproxError, ValueError):
    """Vector lengths disagree with the declared number of terms."""


class DuplicateQ(KernApproxError, ValueError):
    """Two conjugate Poisson terms share the same q."""


class DegenerateCombination(KernApproxError):
    """The constructed combination has an identically vanishing residual."""


class ToleranceNotMet(KernApproxError):
    """Adaptive quadrature ran out of its refinement budget."""


class SimplexCycling(KernApproxError):
    """Simplex iteration cap reached."""


class UnboundedLP(KernApproxError):
    """LP reported unbounded; cannot happen for the L1 fitting program."""
