"""Exception hierarchy shared by all nes_lra modules."""


class NesLraError(Exception):
    """Base class for all errors raised by this package."""


class InvalidConfig(NesLraError):
    """A configuration value is outside its allowed range."""


class InvalidInput(NesLraError):
    """Runtime input (vector, population, value list) has the wrong shape or content."""


class InvalidMatrix(NesLraError):
    """A matrix argument contains non-finite entries or is not usable."""


class SingularMatrix(NesLraError):
    """A matrix that must be positive definite is numerically singular."""


class NumericalFailure(NesLraError):
    """A numerical operation diverged (overflow, non-convergence, non-finite state)."""
