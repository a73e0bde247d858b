"""Exception types shared across the toolkit."""


class WiretapError(Exception):
    """Base class for toolkit errors."""


class DomainError(WiretapError, ValueError):
    """An argument lies outside the domain of the function."""


class ConfigError(WiretapError, ValueError):
    """A configuration is invalid or exceeds a resource guard."""


class InfeasibleError(WiretapError):
    """No parameter choice satisfies the requested targets."""


class NumericError(WiretapError, ArithmeticError):
    """A numerical routine failed to converge or bracket a root."""
