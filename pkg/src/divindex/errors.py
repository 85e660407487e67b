"""Exception hierarchy.

``InputError`` covers malformed input files and invalid tables (CLI exit
code 2); ``DomainError`` covers inputs that are well formed but on which an
index is undefined (CLI exit code 3).
"""


class DivIndexError(ValueError):
    """Base class for all package errors."""


class InputError(DivIndexError):
    pass


class DomainError(DivIndexError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NegativeCount(ParseError):
    pass


class DuplicateUnitId(ParseError):
    pass


class InvalidDistribution(InputError):
    pass


class UnassignedUnit(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class MissingCoordinates(InputError):
    pass


class ZeroPopulation(DomainError):
    pass


class EmptyRegion(DomainError):
    pass


class SupportViolation(DomainError):
    """A group has positive share in ``p`` but zero share in the reference."""

    def __init__(self, group, unit=None):
        self.group = group
        self.unit = unit
        where = f" in unit {unit!r}" if unit is not None else ""
        super().__init__(
            f"group {group!r} is present{where} but absent from the reference distribution"
        )


class DegenerateRegion(DomainError):
    pass


class MissingGroup(DomainError):
    pass


class ZeroMean(DomainError):
    pass


class EmptyDistrictWarning(UserWarning):
    """A district with zero population was dropped from a decomposition."""
