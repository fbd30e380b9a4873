"""The write side: a typestate output buffer for packed values.

A Builder tracks the ordered list of values still owed (``pending``)
and refuses any write that does not match the head obligation, checked
before a single byte is appended. Under the indirection layouts, a
4-byte size slot is reserved immediately before each slotted field's
first byte and backpatched with the field's exact extent the moment the
field completes; slot bookkeeping is internal and never appears in
``pending``, so write code is identical across layouts.

Builders are mutable and exclusively owned: operations mutate in place
and return the builder for chaining. ``finish`` reifies the accumulator
into an immutable, freely shareable PackedBuffer.
"""

from __future__ import annotations

from typing import Callable, Iterable

from . import wire
from .errors import FieldTooLarge, TypeStateViolation
from .reader import PackedBuffer
from .schema import Schema
from .wire import INT, Layout


class Builder:
    """Write-in-progress buffer for an ordered list of packed values."""

    __slots__ = (
        "_schema",
        "_layout",
        "_tables",
        "_buf",
        "_pending",
        "_result",
        "_frames",
        "_finished",
        "_consumed",
        "_introduced",
    )

    def __init__(self, schema: Schema, types: Iterable[str], layout: Layout):
        result = tuple(types)
        if not result:
            raise ValueError("a builder must owe at least one value")
        for tok in result:
            if tok != INT and tok not in schema:
                raise ValueError(f"unknown type {tok!r}")
        self._schema = schema
        self._layout = layout
        self._tables = schema.layout_tables(layout)
        self._buf = bytearray()
        # Head of pending sits at the end of the list (O(1) pop); each
        # entry is (token, needs_size_slot).
        self._pending: list[tuple[str, bool]] = [
            (tok, False) for tok in reversed(result)
        ]
        self._result = result
        # Open size-slot frames: (slot_offset, pending length at which
        # the slotted field is complete). Frames close LIFO.
        self._frames: list[tuple[int, int]] = []
        self._finished = False
        self._consumed = 0
        self._introduced = 0

    @property
    def layout(self) -> Layout:
        return self._layout

    @property
    def schema(self) -> Schema:
        return self._schema

    @property
    def pending(self) -> tuple[str, ...]:
        """Type obligations still owed, next first."""
        return tuple(tok for tok, _ in reversed(self._pending))

    @property
    def result(self) -> tuple[str, ...]:
        """Types the finished buffer will contain."""
        return self._result

    def __len__(self) -> int:
        return len(self._buf)

    def __repr__(self) -> str:
        state = "finished" if self._finished else f"pending={list(self.pending)}"
        return f"Builder({state}, {len(self._buf)} bytes)"

    def _check_head(self, token: str, verb: str) -> None:
        if self._finished:
            raise TypeStateViolation("builder already finished")
        if not self._pending:
            raise TypeStateViolation(f"{verb} but nothing is owed")
        head = self._pending[-1][0]
        if head != token:
            raise TypeStateViolation(f"{verb} but the next obligation is {head}")

    def _open_slot(self) -> None:
        # Reserve 4 zero bytes now; patch when pending shrinks to one
        # less than its current length (the head field is then done).
        self._frames.append((len(self._buf), len(self._pending) - 1))
        self._buf += b"\x00\x00\x00\x00"

    def _settle_frames(self) -> None:
        while self._frames and self._frames[-1][1] == len(self._pending):
            slot_offset, _ = self._frames.pop()
            extent = len(self._buf) - (slot_offset + wire.FIELD_SIZE_WIDTH)
            if extent > wire.MAX_FIELD_SIZE:
                raise FieldTooLarge(
                    f"field of {extent} bytes exceeds the 32-bit size slot"
                )
            self._buf[slot_offset : slot_offset + wire.FIELD_SIZE_WIDTH] = (
                extent.to_bytes(wire.FIELD_SIZE_WIDTH, "little")
            )

    def start_ctor(self, adt_name: str, ordinal: int) -> "Builder":
        """Write a constructor tag; the head obligation becomes its fields."""
        pending = self._pending
        if self._finished or not pending or pending[-1][0] != adt_name:
            self._check_head(adt_name, f"start of a {adt_name} constructor")
        table = self._tables[adt_name]
        if not 0 <= ordinal < table.n_constructors:
            raise ValueError(
                f"{adt_name} has no constructor ordinal {ordinal}"
            )
        if pending[-1][1]:
            self._open_slot()
        pending.pop()
        self._buf.append(ordinal)
        expansion = table.writer_rev[ordinal]
        pending.extend(expansion)
        self._consumed += 1
        self._introduced += len(expansion)
        if self._frames:
            self._settle_frames()
        return self

    def write_prim(self, value: int) -> "Builder":
        """Write one 64-bit integer against an Int obligation."""
        pending = self._pending
        if self._finished or not pending or pending[-1][0] != INT:
            self._check_head(INT, "write of an Int")
        encoded = value.to_bytes(8, "little", signed=True)
        if pending[-1][1]:
            self._open_slot()
        pending.pop()
        self._buf += encoded
        self._consumed += 1
        if self._frames:
            self._settle_frames()
        return self

    def apply(self, step: Callable[["Builder"], "Builder"]) -> "Builder":
        """Composition point: run a builder-step function on this builder.

        Lets recursive packed-to-packed transforms thread their output
        buffer explicitly.
        """
        return step(self)

    def finish(self) -> PackedBuffer:
        """Reify into a PackedBuffer; only legal once nothing is owed."""
        if self._finished:
            raise TypeStateViolation("builder already finished")
        if self._pending:
            raise TypeStateViolation(
                f"finish with obligations still owed: {list(self.pending)}"
            )
        assert not self._frames, "open frames after all obligations met"
        self._finished = True
        return PackedBuffer(bytes(self._buf), self._result)
