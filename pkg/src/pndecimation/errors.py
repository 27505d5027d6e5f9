"""Exception types raised across the package."""


class CapExceededError(ValueError):
    """A requested graph or eigenproblem is larger than the configured cap."""


class LevelMismatchError(ValueError):
    """Function or graph arguments belong to incompatible levels."""


class ForbiddenEigenvalueError(ValueError):
    """An eigenvalue hit one of the values where the extension formula breaks down.

    The offending level is kept on ``level`` (``None`` when not known).
    """

    def __init__(self, message, level=None, value=None):
        super().__init__(message)
        self.level = level
        self.value = value


class DiscriminantError(ValueError):
    """The eigenvalue recursion has no real root for the given parent eigenvalue."""


class OracleMismatchError(ValueError):
    """A seed eigenvalue is not in the brute-force spectrum of its level."""


class ConvergenceError(RuntimeError):
    """An iteration did not reach its tolerance within the allowed levels."""
