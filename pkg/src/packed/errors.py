"""Exception hierarchy for packed-buffer construction and traversal."""

from __future__ import annotations


class PackedError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(PackedError):
    """A schema declaration violates a structural invariant."""


class TypeStateViolation(PackedError):
    """An operation was applied against the wrong head obligation.

    Raised before any byte is produced or consumed, so the builder
    accumulator / cursor position are never left corrupted.
    """


class FieldTooLarge(PackedError):
    """A field's serialized extent does not fit a 32-bit size slot."""


class MalformedBuffer(PackedError):
    """A buffer failed structural validation; ``offset`` locates the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class OutOfBounds(MalformedBuffer):
    """A read needed more bytes than the buffer holds."""

    def __init__(self, offset: int, needed: int, available: int):
        super().__init__(
            f"need {needed} byte(s), only {available} remain", offset
        )
        self.needed = needed
        self.available = available


class InvalidTag(MalformedBuffer):
    """A tag byte does not name a constructor of the expected type."""

    def __init__(self, offset: int, found: int, n_constructors: int):
        super().__init__(
            f"tag {found:#04x} out of range for {n_constructors} constructor(s)",
            offset,
        )
        self.found = found
        self.n_constructors = n_constructors


class FieldSizeMismatch(MalformedBuffer):
    """A size slot disagrees with the measured extent of its field."""

    def __init__(self, offset: int, expected: int, found: int):
        super().__init__(
            f"size slot holds {found}, field extent is {expected}", offset
        )
        self.expected = expected
        self.found = found


class TrailingBytes(MalformedBuffer):
    """A buffer holds extra bytes after its last declared value."""

    def __init__(self, offset: int, extra: int):
        super().__init__(f"{extra} trailing byte(s) after value", offset)
        self.extra = extra
