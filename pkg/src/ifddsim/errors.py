"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """A parameter set violates the numerology or sizing contracts."""


class DomainError(ValueError):
    """An input is outside the mathematical domain of an operation."""


class OrthogonalityError(ValueError):
    """A delay exceeds the cyclic prefix, breaking subcarrier orthogonality."""
