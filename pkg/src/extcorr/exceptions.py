"""Exception types raised across the package."""


class ExtCorrError(Exception):
    """Base class for every error raised by :mod:`extcorr`."""


class DataError(ExtCorrError, ValueError):
    """Input data violates a precondition (bad CSV, too few rows, ...)."""


class CSVParseError(DataError):
    """A CSV cell could not be parsed as a finite real number.

    ``row`` is the 1-based line number in the file (the header is line 1).
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DegenerateColumnError(DataError):
    """A column has zero variance, so Pearson correlation is undefined."""

    def __init__(self, column):
        super().__init__(f"column {column!r} has zero variance")
        self.column = column


class UnknownColumnError(ExtCorrError, KeyError):
    """A column name was requested that the dataset does not contain."""

    def __init__(self, column):
        super().__init__(column)
        self.column = column

    def __str__(self):
        return f"unknown column {self.column!r}"


class ParameterError(ExtCorrError, ValueError):
    """An argument is outside its documented range."""


class ConvergenceError(ExtCorrError, ArithmeticError):
    """An iterative eigensolver failed to converge."""
