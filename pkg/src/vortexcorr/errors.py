"""Exception types shared across the library.

Every failure mode that callers are expected to handle gets its own class so
the CLI can map them onto stable exit codes.
"""


class VortexError(Exception):
    """Base class for library-specific failures."""


class OrderLimitError(VortexError, ValueError):
    """Polynomial / oscillator order above the supported maximum."""


class PauliViolationError(VortexError, ValueError):
    """Fermionic occupation outside {0, 1}."""


class TruncationError(VortexError, ValueError):
    """Requested cutoff would leave more than the allowed tail mass."""

    def __init__(self, message, required_cutoff=None):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class AlgebraInconsistencyError(VortexError, RuntimeError):
    """A quantity that must be real came out with a large imaginary part."""


class QuadratureError(VortexError, RuntimeError):
    """Numerical integration failed to reach the requested accuracy."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoPairsError(VortexError, ValueError):
    """State has no two-particle component, pair statistics are undefined."""


class AnisotropicStateError(VortexError, ValueError):
    """Relative-angle reduction requested for a state whose pair density is
    not rotation invariant; the two-angle surface is the meaningful object."""


class EmptyFramesError(VortexError, ValueError):
    """Estimator called on an empty frame collection."""


class SamplerMethodError(VortexError, RuntimeError):
    """Rejection sampling acceptance collapsed below the usable threshold."""


class UnsupportedStateError(VortexError, ValueError):
    """Operation has no implementation for this state kind (for example a
    first-quantized wavefunction for an indefinite particle number)."""
