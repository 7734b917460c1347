"""Exception types shared across the library."""


class GroupParseError(ValueError):
    """Malformed cycle notation or group file text."""


class DegreeMismatchError(ValueError):
    """Operands act on domains of different sizes."""


class BudgetExceededError(RuntimeError):
    """A backtrack search ran past its node or time budget."""


class DegreeCapError(ValueError):
    """Input is above the hard cap of a brute-force routine."""
