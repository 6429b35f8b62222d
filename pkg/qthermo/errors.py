"""
Errors raised by qthermo.
Input problems are ValueErrors, failures of a computation on valid input are RuntimeErrors.
"""


class QThermoError(Exception):
    pass


class InvalidParameter(QThermoError, ValueError):
    pass


class InvalidState(QThermoError, ValueError):
    pass


class NoInformation(QThermoError, ValueError):
    pass


class InsensitiveObservable(QThermoError, ValueError):
    pass


class ParseError(QThermoError, ValueError):
    field: str

    def __init__(self, message: str, field: str = None):
        super().__init__(message)
        self.field = field


class ValidationError(QThermoError, ValueError):
    field: str

    def __init__(self, message: str, field: str = None):
        super().__init__(message)
        self.field = field


class NumericFailure(QThermoError, RuntimeError):
    pass


class TruncationError(QThermoError, RuntimeError):
    suggested_dim: int

    def __init__(self, message: str, suggested_dim: int):
        super().__init__(message)
        self.suggested_dim = suggested_dim


class RangeError(QThermoError, RuntimeError):
    nbar: float

    def __init__(self, message: str, nbar: float = None):
        super().__init__(message)
        self.nbar = nbar


# Errors the CLI reports as usage/validation problems (exit code 2)
USAGE_ERRORS = (InvalidParameter, InvalidState, ParseError, ValidationError)
