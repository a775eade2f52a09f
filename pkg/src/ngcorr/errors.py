"""Exception hierarchy shared across the package."""


class NGCorrError(Exception):
    """Base class for all package-specific errors."""


class InvalidCutoff(NGCorrError):
    """Fock cutoff too small to be meaningful."""


class BadModeIndex(NGCorrError):
    """Mode index out of range or empty keep-set."""


class DimMismatch(NGCorrError):
    """Operands live on different truncated spaces."""


class TruncationError(NGCorrError):
    """Tail mass in the highest Fock level exceeds the configured tolerance."""


class BadSpec(NGCorrError):
    """Malformed state specification."""


class BadEta(NGCorrError):
    """Transmittance outside [0, 1]."""


class UnphysicalCM(NGCorrError):
    """Covariance matrix violates the uncertainty relation."""


class ConvergenceFailure(NGCorrError):
    """A numerical decomposition failed its self-check."""


class MeanMismatch(NGCorrError):
    """Gaussian composition requires equal first moments."""


class DomainError(NGCorrError):
    """Scalar argument outside the domain of a closed-form expression."""


class SupportMismatch(NGCorrError):
    """supp(rho) not contained in supp(sigma) where required."""


class CaseNotApplicable(NGCorrError):
    """Requested fast path's structural precondition does not hold."""


class ZeroWeight(NGCorrError):
    """Postselection probability density numerically vanishes."""
