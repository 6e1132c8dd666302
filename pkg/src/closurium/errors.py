"""Exception hierarchy shared by every closurium module."""

from __future__ import annotations


class ClosuriumError(Exception):
    """Base class for all errors raised by closurium."""


class AlgebraMismatch(ClosuriumError, ValueError):
    """Two elements (or an element and an operation) belong to different algebras."""


class TooLarge(ClosuriumError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ValidationError(ClosuriumError, ValueError):
    """A model, map or table violates a structural invariant."""

    def __init__(self, invariant: str, detail: str = ""):
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)
        self.invariant = invariant
        self.detail = detail


class Unsupported(ClosuriumError):
    """The requested operation is not defined for this backend."""


class UnknownAtom(ClosuriumError, KeyError):
    def __str__(self) -> str:
        return f"unknown atom {self.args[0]!r}"


class UnknownSort(ClosuriumError, KeyError):
    def __str__(self) -> str:
        return f"unknown sort {self.args[0]!r}"


class FormulaSyntaxError(ClosuriumError, ValueError):
    """Raised by the formula parser; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.message = message
        self.text = text
        self.offset = offset


class RuleViolation(ClosuriumError):
    """A derivation node does not match the schema of its rule."""

    def __init__(self, path: tuple[int, ...], rule: str, reason: str):
        where = "root" + "".join(f".{i}" for i in path)
        super().__init__(f"{where} [{rule}]: {reason}")
        self.path = path
        self.rule = rule
        self.reason = reason
