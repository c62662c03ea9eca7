"""Exception types raised across the package."""


class HyperlabError(Exception):
    """Base class for all package errors."""


class DivisionByZero(HyperlabError, ZeroDivisionError):
    pass


class UnlimitedArgument(HyperlabError, ValueError):
    """An operation needing a limited value received an unlimited one."""


class CenterMismatch(HyperlabError, ValueError):
    pass


class InsufficientTaylorOrder(HyperlabError, ValueError):
    pass


class DomainViolation(HyperlabError, ValueError):
    pass


class ProbeOutsideDomain(DomainViolation):
    pass


class BadIndices(HyperlabError, ValueError):
    pass


class ParseError(HyperlabError, ValueError):
    """Expression could not be parsed; ``position`` is a 0-based column."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(self.annotated())

    def annotated(self) -> str:
        if not self.text:
            return self.reason
        return f"{self.reason} at column {self.position + 1}\n  {self.text}\n  {' ' * self.position}^"
