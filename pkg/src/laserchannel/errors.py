"""Exception hierarchy.

Everything raised on purpose by this package derives from ``LaserChannelError``.
Domain problems additionally subclass ``ValueError`` so callers that only know
the builtins still catch them.
"""


class LaserChannelError(Exception):
    pass


class InvalidDimensionError(LaserChannelError, ValueError):
    pass


class ShapeError(LaserChannelError, ValueError):
    pass


class DomainError(LaserChannelError, ValueError):
    """Rates, times or amplitudes outside the region where a formula applies."""


class NoEquilibriumError(DomainError):
    pass


class UndefinedRatioError(DomainError):
    pass


class NumericalError(LaserChannelError, ArithmeticError):
    """A result failed its own validity checks (non-Hermitian, negative, ...)."""


class SingularBlockError(NumericalError):
    pass


class DegenerateChannelError(NumericalError):
    pass


class KrausOverflowError(NumericalError, OverflowError):
    pass


class HeadroomError(LaserChannelError, RuntimeError):
    """Population reached the top of the truncated Fock space."""


class ConvergenceError(LaserChannelError, RuntimeError):
    pass
