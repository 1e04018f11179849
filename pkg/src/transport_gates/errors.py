"""Exception types raised by the toolkit.

Domain errors subclass :class:`ValueError` so callers that only care about
"bad input" can catch the builtin.
"""


class TransportGateError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TransportGateError, ValueError):
    """An argument lies outside the region where a formula is valid."""


class OverflowDomain(DomainError):
    """Argument outside the strip where the error-function kernels are finite."""


class ParaxialDomain(DomainError):
    """Position too far from the focus for the collimated-beam approximation."""


class DegenerateGeometry(DomainError):
    """Transport direction parallel to the beam axis (sin(angle) == 0)."""


class ZeroProjection(DomainError):
    """Wavevector difference has no component along the transport axis."""


class NotUnitary(DomainError):
    """Matrix handed to a decomposition routine is not unitary."""


class OutOfRange(DomainError):
    """Requested discrete beam angle index does not exist."""


class NoSolution(DomainError):
    """Design equations have no physical (positive-speed) solution."""


class DegenerateRatio(DomainError):
    """Equal state-dependent Rabi frequencies give no logical phase."""


class ExpansionInvalid(DomainError):
    """Washboard amplitude too large for the harmonic expansion."""


class ToleranceNotMet(TransportGateError):
    """Numerical integration ran out of budget before reaching tolerance.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(TransportGateError):
    """Invalid run configuration (unknown key, wrong type, non-physical value)."""
