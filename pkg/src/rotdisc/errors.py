"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed literal. ``position`` is the 0-based offset of the offending character."""

    def __init__(self, message, text, position):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class ConsistencyError(RuntimeError):
    """Two computations that must agree did not (an implementation bug, never a user error)."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed its configured resource budget."""
