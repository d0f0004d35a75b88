"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario id, config key, or parameter value (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Quadrature failed to converge or a sweep produced non-finite values
    (CLI exit code 3)."""
