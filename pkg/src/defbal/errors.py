"""Exception types raised by the solvers and the benchmark front end."""


class DefbalError(Exception):
    """Base class for all package errors."""


class DimensionError(DefbalError, ValueError):
    """Vector or matrix shapes do not agree."""


class ContractError(DefbalError):
    """An operation was called outside its precondition."""


class InstanceError(DefbalError, ValueError):
    """A problem instance is degenerate (zero column, zero target, ...)."""


class ConfigError(DefbalError, ValueError):
    """Invalid algorithm or benchmark configuration."""


class ParseError(DefbalError, ValueError):
    """Malformed instance file."""


class OracleError(DefbalError):
    """The reference solver failed to reach its tolerance."""
