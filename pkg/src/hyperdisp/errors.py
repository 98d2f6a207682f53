"""Exception hierarchy used across the solver."""


class HyperDispError(Exception):
    """Base class for all solver errors."""


class NonPositiveDepth(HyperDispError):
    """Depth (or mixture density) at or below the admissibility floor."""


class NonPositiveBubbleVolume(HyperDispError):
    """Mixture density too high: the gas volume per unit mass is not positive."""


class DomainError(HyperDispError):
    """Argument outside the domain of a closure function."""


class DegenerateStarState(HyperDispError):
    """HLLC contact-speed denominator vanished."""


class ZeroWaveSpeed(HyperDispError):
    """Maximal characteristic speed is zero, no CFL time step exists."""


class HyperbolicityViolation(HyperDispError):
    """Eigenstructure check failed for a state."""


class PlateauNotFound(HyperDispError):
    """No flat mean-flow window was found in a dam-break profile."""


class ShapeMismatch(HyperDispError):
    """Two fields that should be comparable have different shapes."""


class ConfigError(HyperDispError):
    """Invalid scenario or configuration value."""
