"""Exception hierarchy shared by every module of the package."""


class OPTError(Exception):
    """Base class for all errors raised by simplicial_opt."""


class DimensionMismatch(OPTError, ValueError):
    pass


class SystemMismatch(OPTError, ValueError):
    pass


class NoDeterministicEffect(OPTError):
    pass


class NonUniqueDeterministicEffect(OPTError):
    pass


class MissingRule(OPTError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TooManyFactors(OPTError, ValueError):
    pass


class InvalidDistribution(OPTError, ValueError):
    pass


class NotMaximal(OPTError, ValueError):
    pass


class NotDeterministic(OPTError, ValueError):
    pass


class UnknownSystem(OPTError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TheorySyntaxError(OPTError, ValueError):
    """Malformed theory text. ``path`` locates the offending field."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


class TheoryValidationError(OPTError, ValueError):
    """A composition rule or system failed its invariants on load."""

    def __init__(self, message, path=None, violations=()):
        self.path = path
        self.violations = list(violations)
        super().__init__(f"{path}: {message}" if path else message)
