"""The read side: packed buffers and type-disciplined cursors.

A ``PackedBuffer`` is an immutable byte sequence plus the ordered list
of value types packed inside it; casting bytes in and out is O(1) and
unvalidated. A ``Cursor`` is a read position plus the obligations still
ahead of it; every read is checked against the head obligation before
any byte is consumed, so misuse fails deterministically and adversarial
bytes can only produce InvalidTag/OutOfBounds errors.

``RawCursor`` is the unchecked counterpart: offset arithmetic with
bounds checks only, for measuring what the obligation discipline costs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, TypeVar

from . import wire
from .errors import OutOfBounds, TypeStateViolation
from .wire import FIELD_SIZE

T = TypeVar("T")

_unpack_i64 = struct.Struct("<q").unpack_from
_unpack_u32 = struct.Struct("<I").unpack_from

# Obligation stacks are immutable cons lists: None or (token, rest).
# Pushing k tokens costs O(k) and forked cursors share structure.
_Oblig = Optional[tuple]


def _cons_from(tokens: Iterable[str], rest: _Oblig) -> _Oblig:
    for tok in reversed(tuple(tokens)):
        rest = (tok, rest)
    return rest


class Meter:
    """Mutable counter of bytes consumed, shared by derived cursors.

    Skipped size slots count as consumed (4 bytes); jumped-over fields
    do not.
    """

    __slots__ = ("bytes_consumed",)

    def __init__(self) -> None:
        self.bytes_consumed = 0


@dataclass(frozen=True)
class PackedBuffer:
    """Finished packed bytes and the types they claim to contain.

    Construction is an unchecked O(1) cast; well-formedness is
    established on demand by ``schema.validate_buffer``.
    """

    data: bytes
    contents: tuple[str, ...]

    def cursor(self, meter: Meter | None = None) -> "Cursor":
        return Cursor(self.data, 0, _cons_from(self.contents, None), meter)


def from_bytes(data: bytes, contents: Iterable[str]) -> PackedBuffer:
    """O(1) cast of raw bytes to a typed packed buffer. No validation."""
    return PackedBuffer(data, tuple(contents))


def to_bytes(packed: PackedBuffer) -> bytes:
    """O(1) cast back to raw bytes."""
    return packed.data


class Cursor:
    """An immutable read position; operations return advanced copies.

    Copying a cursor forks the read position; the underlying buffer is
    never copied. Reads are only legal against the head of the
    remaining obligation list and the offset never decreases.
    """

    __slots__ = ("_data", "_pos", "_rem", "_meter")

    def __init__(self, data: bytes, pos: int, rem: _Oblig, meter: Meter | None):
        self._data = data
        self._pos = pos
        self._rem = rem
        self._meter = meter

    @property
    def offset(self) -> int:
        return self._pos

    @property
    def remaining(self) -> tuple[str, ...]:
        """Obligations ahead of the cursor, head first."""
        out = []
        node = self._rem
        while node is not None:
            out.append(node[0])
            node = node[1]
        return tuple(out)

    @property
    def exhausted(self) -> bool:
        return self._rem is None

    def __repr__(self) -> str:
        head = self._rem[0] if self._rem is not None else "-"
        return f"Cursor(offset={self._pos}, head={head})"

    def _raise_mismatch(self, token: str) -> None:
        # cold path: called only after a head check has already failed
        if self._rem is None:
            raise TypeStateViolation(
                f"read of {token} against an exhausted cursor"
            )
        raise TypeStateViolation(
            f"read of {token} but the next obligation is {self._rem[0]}"
        )

    def read_prim(self) -> tuple[int, "Cursor"]:
        """Read the 8-byte integer at the head of the obligations."""
        rem = self._rem
        if rem is None or rem[0] != wire.INT:
            self._raise_mismatch(wire.INT)
        pos = self._pos
        data = self._data
        if pos + 8 > len(data):
            raise OutOfBounds(pos, 8, len(data) - pos)
        meter = self._meter
        if meter is not None:
            meter.bytes_consumed += 8
        return _unpack_i64(data, pos)[0], Cursor(data, pos + 8, rem[1], meter)

    def read_field_size(self) -> tuple[int, "Cursor"]:
        """Read the 4-byte size slot at the head of the obligations."""
        rem = self._rem
        if rem is None or rem[0] != FIELD_SIZE:
            self._raise_mismatch(FIELD_SIZE)
        pos = self._pos
        data = self._data
        if pos + 4 > len(data):
            raise OutOfBounds(pos, 4, len(data) - pos)
        meter = self._meter
        if meter is not None:
            meter.bytes_consumed += 4
        return _unpack_u32(data, pos)[0], Cursor(data, pos + 4, rem[1], meter)

    def skip_field_size(self) -> "Cursor":
        """Step over one size slot without decoding it."""
        rem = self._rem
        if rem is None or rem[0] != FIELD_SIZE:
            self._raise_mismatch(FIELD_SIZE)
        pos = self._pos
        data = self._data
        if pos + 4 > len(data):
            raise OutOfBounds(pos, 4, len(data) - pos)
        meter = self._meter
        if meter is not None:
            meter.bytes_consumed += 4
        return Cursor(data, pos + 4, rem[1], meter)

    def skip_field_sizes(self) -> "Cursor":
        """Step over every size slot at the head (none under Plain)."""
        cur = self
        while cur._rem is not None and cur._rem[0] == FIELD_SIZE:
            cur = cur.skip_field_size()
        return cur

    def jump_over_field(self, n: int) -> "Cursor":
        """Discard the head field obligation by advancing ``n`` bytes.

        ``n`` must come from the size slot read immediately before the
        field; the jumped bytes are never inspected and do not count as
        consumed.
        """
        if self._rem is None:
            raise TypeStateViolation("jump against an exhausted cursor")
        if self._rem[0] == FIELD_SIZE:
            raise TypeStateViolation(
                "jump target must be a field, not its size slot"
            )
        if n < 0:
            raise ValueError("jump distance must be non-negative")
        if self._pos + n > len(self._data):
            raise OutOfBounds(self._pos, n, len(self._data) - self._pos)
        return Cursor(self._data, self._pos + n, self._rem[1], self._meter)

    def _case_step(
        self, adt_name: str, surfaces: tuple[tuple[str, ...], ...]
    ) -> tuple[int, "Cursor"]:
        """Read a tag and replace the head obligation by the matched
        constructor's reader surface. Used by generated case/transform."""
        rem = self._rem
        if rem is None or rem[0] != adt_name:
            self._raise_mismatch(adt_name)
        ordinal = wire.decode_tag(self._data, self._pos, len(surfaces))
        meter = self._meter
        if meter is not None:
            meter.bytes_consumed += wire.TAG_WIDTH
        tail = _cons_from(surfaces[ordinal], rem[1])
        return ordinal, Cursor(self._data, self._pos + 1, tail, meter)


def run_reader(
    packed: PackedBuffer,
    reader: Callable[[Cursor], tuple[T, Cursor]],
    meter: Meter | None = None,
) -> tuple[T, Cursor]:
    """Execute a cursor computation from offset 0.

    Returns the computation's value and the suffix cursor, so buffers
    holding several values can be read in stages.
    """
    return reader(packed.cursor(meter))


class RawCursor:
    """Mutable offset-arithmetic cursor with bounds checks only.

    No obligation tracking: the caller asserts layout knowledge. Exists
    to measure the checked abstraction's overhead; results must match
    the checked operations on every valid buffer.
    """

    __slots__ = ("data", "pos")

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def read_tag(self) -> int:
        if self.pos >= len(self.data):
            raise OutOfBounds(self.pos, wire.TAG_WIDTH, 0)
        value = self.data[self.pos]
        self.pos += wire.TAG_WIDTH
        return value

    def read_int(self) -> int:
        value = wire.decode_int64(self.data, self.pos)
        self.pos += wire.INT_WIDTH
        return value

    def read_size(self) -> int:
        value = wire.decode_field_size(self.data, self.pos)
        self.pos += wire.FIELD_SIZE_WIDTH
        return value

    def skip(self, n: int) -> None:
        if n < 0:
            raise ValueError("skip distance must be non-negative")
        if self.pos + n > len(self.data):
            raise OutOfBounds(self.pos, n, len(self.data) - self.pos)
        self.pos += n
