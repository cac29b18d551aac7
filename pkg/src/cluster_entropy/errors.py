"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures without a
lookup table: 1 for I/O, 2 for parse/validation problems, 3 for domain
errors such as a manufacturer the matrix does not know about.
"""

from __future__ import annotations


class EntropyError(Exception):
    exit_code = 2


class ParseError(EntropyError):
    """Input could not be parsed at all (bad JSON, ragged CSV, non-numeric cell)."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class SchemaError(EntropyError):
    """Input parsed but a field is missing, unknown, or of the wrong type."""

    def __init__(self, message: str, *, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ValidationError(EntropyError):
    """A domain invariant is violated (duplicate component kind, bad count, ...)."""


class InvalidMachine(ValidationError):
    pass


class AsymmetricMatrix(ValidationError):
    def __init__(self, first: str, second: str, forward: float, backward: float):
        self.pair = (first, second)
        super().__init__(
            f"compatibility matrix is not symmetric: C({first},{second})={forward!r} "
            f"but C({second},{first})={backward!r}"
        )


class RangeError(ValidationError):
    pass


class NegativeInput(ValidationError):
    pass


class InvalidR(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DegenerateSeries(ValidationError):
    pass


class InsufficientData(ValidationError):
    pass


class UnknownBenchmark(ValidationError):
    pass


class EmptyCluster(ValidationError):
    pass


class UnknownManufacturer(EntropyError):
    exit_code = 3

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown manufacturer {name!r}: not present in the compatibility matrix")
