"""Exception hierarchy.

Everything raised on purpose by this package derives from
:class:`CartanHartogsError`, so callers (the CLI in particular) can tell
a numerical/precondition failure apart from a programming error.
"""


class CartanHartogsError(Exception):
    """Base class for all package errors."""


class InvalidKindError(CartanHartogsError, ValueError):
    """Domain parameters outside the classical bounds, or unparsable kind."""


class ConsistencyError(CartanHartogsError):
    """Classification table disagrees with the invariant identities."""


class ShapeError(CartanHartogsError, ValueError):
    pass


class NonpositiveNormError(CartanHartogsError, ValueError):
    """Generic norm evaluated outside the closed domain."""


class SamplingError(CartanHartogsError):
    pass


class DomainViolationError(CartanHartogsError, ValueError):
    """A function that must stay positive was nonpositive at a stencil node."""


class ConventionError(CartanHartogsError):
    """Metric failed to be positive definite at an interior point."""


class PreconditionError(CartanHartogsError, ValueError):
    pass


class OutsideDomainError(CartanHartogsError, ValueError):
    pass


class BoundaryError(CartanHartogsError, ValueError):
    """Point expected on the smooth boundary part but it is not."""


class NearBoundaryError(CartanHartogsError):
    """Series tail bound cannot be met within the term budget."""


class UnsupportedError(CartanHartogsError):
    """Requested path is not available for this configuration."""


class PoleError(CartanHartogsError, ArithmeticError):
    pass


class HypothesisViolationError(CartanHartogsError, ValueError):
    """m does not satisfy the admissibility bound of the distortion formula."""


class GridError(CartanHartogsError, ValueError):
    pass


class IllConditionedError(CartanHartogsError):
    pass


class QuadratureError(CartanHartogsError):
    pass


class IntegrandError(CartanHartogsError, ValueError):
    pass


class ZDependenceError(CartanHartogsError):
    """Fitted coefficients disagree across base points beyond tolerance."""
