"""Exception hierarchy shared by the simulator modules."""


class QmcError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QmcError, ValueError):
    """An input violates a structural constraint (shape, range, hermiticity)."""


class StateValidationError(ValidationError):
    """A matrix is not a valid density matrix (trace, hermiticity, positivity)."""


class DomainError(QmcError, ValueError):
    """A physical parameter is outside its admissible domain."""


class IntegrationError(QmcError):
    """The fixed-step integrator was configured outside its stability range."""


class DegenerateKernelError(QmcError):
    """The outcome chain has no unique stationary distribution."""


class ConfigError(QmcError):
    """A sweep configuration file or CLI override is invalid."""


class ParseError(QmcError):
    """A CSV or manifest file could not be parsed."""
