"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class DcosError(Exception):
    """Base class for every error raised by the package."""


class IngestError(DcosError):
    pass


class EmptyInput(IngestError):
    def __init__(self, path):
        super().__init__(f"{path}: no data rows")
        self.path = path


class ParseError(IngestError):
    def __init__(self, line: int, column: str, value: str = ""):
        super().__init__(f"line {line}: cannot parse column {column!r} (value {value!r})")
        self.line = line
        self.column = column


class NonPositivePrice(IngestError):
    def __init__(self, line: int, price: float):
        super().__init__(f"line {line}: non-positive price {price!r}")
        self.line = line


class TimestampRegression(IngestError):
    def __init__(self, line: int):
        super().__init__(f"line {line}: timestamp decreases")
        self.line = line


class EmptySeries(DcosError):
    pass


class NonFiniteLogPrice(DcosError):
    def __init__(self, index: int):
        super().__init__(f"non-finite log-price at index {index}")
        self.index = index


class InvalidRange(DcosError):
    pass


class NoEvents(DcosError):
    pass


class EmptyCycles(DcosError):
    pass


class EmptyLengths(DcosError):
    pass


class ZeroMean(DcosError):
    pass


class MissingFields(DcosError):
    def __init__(self, fields):
        super().__init__("missing fields: " + ", ".join(fields))
        self.fields = tuple(fields)


class NoZoneFound(DcosError):
    """No grid point reaches the target Dc share.

    ``labels`` still carries a per-point regime labeling so callers can
    report something useful.
    """

    def __init__(self, message: str, labels=()):
        super().__init__(message)
        self.labels = tuple(labels)


class TooFewPoints(DcosError):
    pass


class NonPositiveFrequency(DcosError):
    pass


class InvalidDof(DcosError, ValueError):
    pass
