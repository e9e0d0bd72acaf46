"""Exception types raised across the package."""


class QWalkError(Exception):
    """Base class for package errors."""


class NormalizationError(QWalkError, ValueError):
    """Amplitudes do not have unit norm."""


class MomentError(QWalkError, ArithmeticError):
    """Moments are inconsistent (variance clearly negative)."""


class ScheduleExhausted(QWalkError, IndexError):
    """A tabulated coin schedule has no angle for the requested step."""


class MemoryLimitError(QWalkError, MemoryError):
    """The lattice window would exceed the configured site cap."""


class BesselRangeError(QWalkError, OverflowError):
    """Bessel order or argument outside the supported range."""


class InconsistentInitialData(QWalkError, ValueError):
    """Initial amplitudes give a negative leading sigma coefficient."""


class InsufficientDataError(QWalkError, ValueError):
    """Not enough usable samples for a fit or classification."""


class ConfigError(QWalkError, ValueError):
    """Invalid experiment configuration."""
