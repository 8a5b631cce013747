"""Exception hierarchy shared by every module in the package."""


class FrameError(Exception):
    """Base class for all errors raised by corrframes."""


class InvalidInputError(FrameError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateInputError(FrameError, ValueError):
    """Input is numerically rank deficient or otherwise degenerate."""


class NotFoundError(FrameError, KeyError):
    """A catalog name does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


class ConstructionError(FrameError, RuntimeError):
    """A catalog construction failed its own self-validation."""


class OptimizerFailure(FrameError, RuntimeError):
    """Every optimizer restart failed to produce a feasible frame."""


class FrameFileError(FrameError, ValueError):
    """Malformed frame file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
