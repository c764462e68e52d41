"""Exception hierarchy shared by every bval module."""

from __future__ import annotations


class BError(Exception):
    """Base class for all errors raised by bval."""


class HeterogeneousSet(BError):
    pass


class ScopeOverflow(BError):
    pass


class LexError(BError):
    def __init__(self, pos, char):
        self.pos = pos
        self.char = char
        super().__init__(f"{pos[0]}:{pos[1]}: illegal character {char!r}")


class ParseError(BError):
    def __init__(self, pos, message, expected=()):
        self.pos = pos
        self.expected = tuple(expected)
        text = f"{pos[0]}:{pos[1]}: {message}"
        if self.expected:
            text += f" (expected one of {', '.join(self.expected)})"
        super().__init__(text)


class TypeCheckError(BError):
    def __init__(self, pos, message, expected=None, found=None):
        self.pos = pos
        self.expected = expected
        self.found = found
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)


class UnknownIdentifier(TypeCheckError):
    def __init__(self, pos, name):
        self.name = name
        super().__init__(pos, f"unknown identifier {name}")


class Undefined(BError):
    """A well-definedness violation (division by zero, f(x) outside dom(f), ...)."""

    def __init__(self, reason, pos=None):
        self.reason = reason
        self.pos = pos
        super().__init__(reason)


class InternalError(BError):
    """The kernel reached a state that a correct build never reaches."""


class Timeout(BError):
    """Evaluation could not finish: fuel exhausted or an infinite set had to be listed."""


class FuelExhausted(Timeout):
    pass


class EnumerationLimit(Timeout):
    pass


class UnknownMutation(BError):
    pass


class DuplicateLaw(BError):
    pass


class UnsupportedOperator(BError):
    pass


class UndetectedMutation(BError):
    def __init__(self, mutation):
        self.mutation = mutation
        super().__init__(f"mutation {mutation} was not detected by any suite")
