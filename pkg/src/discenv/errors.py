"""Exception hierarchy. Exit-code mapping lives in the CLI."""


class DiscEnvError(Exception):
    """Base class for all package errors."""


class ConfigError(DiscEnvError):
    """Malformed input files or inconsistent options."""


class DomainError(DiscEnvError):
    """Evaluation requested outside a domain of definition."""


class OriginViolation(DiscEnvError):
    """A lifted disc came too close to the origin of C^m."""


class InfeasibleDiscError(DiscEnvError):
    """A disc boundary leaves the prescribed domain."""


class BoundaryZeroError(DiscEnvError):
    """A polynomial has a zero on (or within margin of) the unit circle."""


class NumericalError(DiscEnvError):
    """Quadrature/optimization failed a numerical sanity check."""
