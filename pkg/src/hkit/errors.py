"""Exception hierarchy."""


class HkitError(Exception):
    """Base class for all library errors."""


class InvalidArgument(HkitError, ValueError):
    """An argument is outside its admissible range."""


class InvalidGrid(InvalidArgument):
    """A grid violates monotonicity, positivity or shape constraints."""


class InvalidConfig(InvalidArgument):
    """A configuration value is outside its validated range."""


class ParseError(HkitError):
    """An input file does not match its schema.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number where the problem was detected.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CalibrationError(HkitError):
    """A calibrated constant is inconsistent across reference parameters."""


class DegeneratePairing(HkitError):
    """The pairing (f, phi) used to normalize a factorization vanishes."""


class PreconditionViolation(HkitError):
    """A decay certificate required by a check could not be established."""
