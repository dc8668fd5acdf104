"""Error kinds raised by the cvbell library.

All errors derive from ValueError so callers that only care about bad input
can catch that; the CLI maps the concrete classes to exit codes.
"""


class CVBellError(ValueError):
    """Base class for every library error"""


class MalformedMatrixError(CVBellError):
    """Covariance matrix has the wrong shape, non-finite entries or is not symmetric"""


class DomainError(CVBellError):
    """Argument outside the domain of the operation"""


class UnphysicalStateError(DomainError):
    """State violates the uncertainty principle"""


class UnphysicalPointError(DomainError):
    """(mu_s, C_ab) point outside the physical region"""


class InconsistentInvariantsError(CVBellError):
    """Symplectic invariants admit no real standard form"""


class UnsupportedShapeError(CVBellError):
    """Operation defined only on the symmetric family n == m, c1 == -c2"""


class SingularStateError(CVBellError):
    """Covariance matrix is singular or not positive-definite"""


class UnderdeterminedError(CVBellError):
    """Measurement settings do not determine every covariance entry"""


class PreconditionError(DomainError):
    """Input is valid but does not meet the operation's precondition"""
