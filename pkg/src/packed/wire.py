"""Bit-exact wire encoding: tags, primitives, field sizes, layout rules.

A packed value is a constructor tag byte followed by its fields inlined
back to back, with no padding. Depending on the layout mode, a 4-byte
size slot precedes some or all fields, recording the full serialized
extent of the field after it (nested tags and nested size slots
included, the slot itself excluded). All multi-byte values are
little-endian, so a buffer produced on any host decodes identically
everywhere.
"""

from __future__ import annotations

import enum
import struct

from .errors import FieldTooLarge, InvalidTag, OutOfBounds

#: Obligation token for the 64-bit signed integer primitive.
INT = "Int"

#: Obligation token for a 4-byte size slot on the reader surface.
FIELD_SIZE = "FieldSize"

#: Byte widths of the fixed-size wire elements.
TAG_WIDTH = 1
INT_WIDTH = 8
FIELD_SIZE_WIDTH = 4

MAX_FIELD_SIZE = 0xFFFF_FFFF

_I64 = struct.Struct("<q")
_U32 = struct.Struct("<I")


class Layout(enum.Enum):
    """Buffer-wide rule for where size slots appear.

    PLAIN inserts none; INDIRECT puts one before every constructor
    field; INDIRECT_SKIP_LAST puts one before every field except each
    constructor's last.
    """

    PLAIN = "plain"
    INDIRECT = "indirect"
    INDIRECT_SKIP_LAST = "indirect-skip-last"

    def __str__(self) -> str:
        return self.value


def field_has_size_slot(layout: Layout, index: int, n_fields: int) -> bool:
    """Whether field ``index`` of an ``n_fields`` constructor gets a slot."""
    if layout is Layout.PLAIN:
        return False
    if layout is Layout.INDIRECT:
        return True
    return index < n_fields - 1


def encode_int64(value: int) -> bytes:
    """8 bytes, little-endian two's complement.

    Raises OverflowError outside the signed 64-bit range.
    """
    return value.to_bytes(INT_WIDTH, "little", signed=True)


def decode_int64(data: bytes, offset: int = 0) -> int:
    if offset + INT_WIDTH > len(data):
        raise OutOfBounds(offset, INT_WIDTH, len(data) - offset)
    return _I64.unpack_from(data, offset)[0]


def encode_field_size(n: int) -> bytes:
    """4 bytes, little-endian unsigned."""
    if n < 0:
        raise ValueError(f"field size must be non-negative, got {n}")
    if n > MAX_FIELD_SIZE:
        raise FieldTooLarge(f"field of {n} bytes exceeds the 32-bit size slot")
    return _U32.pack(n)


def decode_field_size(data: bytes, offset: int = 0) -> int:
    if offset + FIELD_SIZE_WIDTH > len(data):
        raise OutOfBounds(offset, FIELD_SIZE_WIDTH, len(data) - offset)
    return _U32.unpack_from(data, offset)[0]


def encode_tag(ordinal: int) -> bytes:
    """Single byte equal to the constructor's declaration index."""
    if not 0 <= ordinal <= 0xFF:
        raise ValueError(f"tag ordinal {ordinal} does not fit one byte")
    return bytes((ordinal,))


def decode_tag(data: bytes, offset: int, n_constructors: int) -> int:
    """Read and range-check one tag byte against the expected type."""
    if offset >= len(data):
        raise OutOfBounds(offset, TAG_WIDTH, 0)
    ordinal = data[offset]
    if ordinal >= n_constructors:
        raise InvalidTag(offset, ordinal, n_constructors)
    return ordinal
