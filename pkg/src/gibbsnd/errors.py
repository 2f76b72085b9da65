"""Exception types raised by the library.

Every numerical precondition failure maps to a named exception so callers
(and the command-line runner) can report which contract was violated.
"""


class GibbsNDError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(GibbsNDError):
    """Operands have incompatible dimensions."""


class NotHermitian(GibbsNDError):
    """Matrix failed the Hermiticity check."""


class NoConvergence(GibbsNDError):
    """Eigensolver did not converge."""


class DomainError(GibbsNDError):
    """Scalar function undefined at an eigenvalue of the operand."""


class SeriesDiverges(GibbsNDError):
    """Taylor series argument outside the radius of convergence."""


class IllConditioned(GibbsNDError):
    """Gibbs state too close to singular for the requested operation."""


class NotDetailedBalanced(GibbsNDError):
    """Map does not satisfy detailed balance within tolerance."""


class SpectrumOutOfRange(GibbsNDError):
    """Symmetrized channel spectrum leaves [0, 1] beyond tolerance."""


class GapTooSmall(GibbsNDError):
    """Spectral gap below the usable floor."""


class RejectionNotPSD(GibbsNDError):
    """Completion operand has a genuinely negative eigenvalue."""


class ParameterOutOfRange(GibbsNDError):
    """Channel parameter violates its admissible range."""


class BranchProbabilityZero(GibbsNDError):
    """Post-selection on a branch of (near-)zero probability."""


class BranchProbabilityDegenerate(GibbsNDError):
    """All branch probabilities vanish during sampling."""


class TooLarge(GibbsNDError):
    """Exact enumeration request exceeds the size guard."""


class KrausExplosion(GibbsNDError):
    """Explicit Kraus form requested but the operator count is infeasible."""


class DegenerateVariance(GibbsNDError):
    """Outcome variance too small to normalize correlations."""


class NotStationary(GibbsNDError):
    """Instrument does not fix the Gibbs state within tolerance."""


class CenteredMapNotDB(GibbsNDError):
    """Centered measurement map fails detailed balance."""


class NotTracePreserving(GibbsNDError):
    """Kraus family does not sum to the identity within tolerance."""


class NormTooLarge(GibbsNDError):
    """Operator norm exceeds the contraction requirement."""


class DegenerateCoefficients(GibbsNDError):
    """Linear combination has no nonzero coefficient."""


class AliasRegimeViolated(GibbsNDError):
    """Quadrature grid spacing too coarse for the alias bound to apply."""


class ConfigError(GibbsNDError):
    """Experiment configuration is malformed or inconsistent."""
