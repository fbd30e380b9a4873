"""User-declared algebraic data types and the interpretive pack/unpack engine.

The dynamic engine here (``dynamic_pack`` / ``validate_buffer`` /
``size_of``) walks a schema at runtime and is deliberately independent
of the builder/cursor machinery: it computes size slots up front from
``size_of`` instead of backpatching, and decodes with plain index
arithmetic instead of cursors. The two routes are checked against each
other in the test suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from . import wire
from .errors import (
    FieldSizeMismatch,
    OutOfBounds,
    SchemaError,
    TrailingBytes,
)
from .wire import FIELD_SIZE, INT, Layout

#: Type names that cannot be declared: they are wire-level tokens.
RESERVED_NAMES = frozenset({INT, FIELD_SIZE})

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class ConstructorDecl:
    """One constructor: a name and an ordered field-type list.

    A field type is either ``wire.INT`` or the name of a declared ADT.
    """

    name: str
    fields: tuple[str, ...] = ()


@dataclass(frozen=True)
class AdtDecl:
    name: str
    constructors: tuple[ConstructorDecl, ...]

    def ordinal_of(self, ctor_name: str) -> int:
        for i, ctor in enumerate(self.constructors):
            if ctor.name == ctor_name:
                return i
        raise KeyError(f"{self.name} has no constructor {ctor_name!r}")


@dataclass(frozen=True)
class ValueTree:
    """Dynamic value: ADT name, constructor ordinal and children.

    Children are ints for primitive fields and nested ValueTrees for
    ADT fields, in field order.
    """

    adt: str
    ordinal: int
    children: tuple[Union[int, "ValueTree"], ...] = ()


class Schema:
    """An ordered collection of ADT declarations.

    Immutable by convention once constructed; ``validate`` checks the
    structural invariants and must pass before the schema is used for
    packing or decoding.
    """

    def __init__(self, adts: Iterable[AdtDecl]):
        self.adts: tuple[AdtDecl, ...] = tuple(adts)
        self._by_name: dict[str, AdtDecl] = {}
        for decl in self.adts:
            self._by_name.setdefault(decl.name, decl)
        self._tables: dict[Layout, dict[str, "_AdtTable"]] = {}

    def adt(self, name: str) -> AdtDecl:
        try:
            return self._by_name[name]
        except KeyError:
            raise SchemaError(f"no ADT named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def validate(self) -> None:
        """Raise SchemaError on the first invariant violation."""
        seen: set[str] = set()
        for decl in self.adts:
            if decl.name in RESERVED_NAMES:
                raise SchemaError(f"{decl.name!r} is a reserved type name")
            if decl.name in seen:
                raise SchemaError(f"duplicate ADT name {decl.name!r}")
            seen.add(decl.name)
        for decl in self.adts:
            if not decl.constructors:
                raise SchemaError(f"{decl.name} declares no constructors")
            if len(decl.constructors) > 256:
                raise SchemaError(
                    f"{decl.name} declares {len(decl.constructors)} "
                    "constructors; tags are one byte (max 256)"
                )
            ctor_names: set[str] = set()
            for ctor in decl.constructors:
                if ctor.name in ctor_names:
                    raise SchemaError(
                        f"duplicate constructor {ctor.name!r} in {decl.name}"
                    )
                ctor_names.add(ctor.name)
                for ft in ctor.fields:
                    if ft != INT and ft not in self._by_name:
                        raise SchemaError(
                            f"{decl.name}.{ctor.name} references "
                            f"undeclared type {ft!r}"
                        )

    def layout_tables(self, layout: Layout) -> dict[str, "_AdtTable"]:
        """Per-ADT obligation tables for one layout, cached."""
        tables = self._tables.get(layout)
        if tables is None:
            tables = {
                decl.name: _AdtTable(decl, layout) for decl in self.adts
            }
            self._tables[layout] = tables
        return tables


class _AdtTable:
    """Precomputed per-constructor obligation sequences for one layout.

    ``*_rev`` hold the same tuples reversed, ready to push onto the
    obligation stacks without re-reversing on every hot-path call.
    """

    __slots__ = (
        "decl",
        "n_constructors",
        "writer",
        "writer_rev",
        "reader",
        "reader_rev",
    )

    def __init__(self, decl: AdtDecl, layout: Layout):
        self.decl = decl
        self.n_constructors = len(decl.constructors)
        writer = []
        reader = []
        for ctor in decl.constructors:
            n = len(ctor.fields)
            w = tuple(
                (ft, wire.field_has_size_slot(layout, i, n))
                for i, ft in enumerate(ctor.fields)
            )
            r: list[str] = []
            for ft, slotted in w:
                if slotted:
                    r.append(FIELD_SIZE)
                r.append(ft)
            writer.append(w)
            reader.append(tuple(r))
        self.writer = tuple(writer)
        self.writer_rev = tuple(tuple(reversed(w)) for w in writer)
        self.reader = tuple(reader)
        self.reader_rev = tuple(tuple(reversed(r)) for r in reader)


def parse_schema(text: str) -> Schema:
    """Parse declarations like ``data Tree = Leaf Int | Node Tree Tree``.

    Whitespace-insensitive; one declaration per ``data`` keyword. Valid
    field tokens are ``Int`` and declared type names. The returned
    schema is validated.
    """
    tokens = _tokenize(text)
    pos = 0
    decls: list[AdtDecl] = []
    while pos < len(tokens):
        if tokens[pos] != "data":
            raise SchemaError(
                f"expected 'data', found {tokens[pos]!r} (token {pos})"
            )
        pos += 1
        name = _expect_ident(tokens, pos)
        pos += 1
        if pos >= len(tokens) or tokens[pos] != "=":
            raise SchemaError(f"expected '=' after 'data {name}'")
        pos += 1
        ctors: list[ConstructorDecl] = []
        while True:
            cname = _expect_ident(tokens, pos)
            pos += 1
            fields: list[str] = []
            while (
                pos < len(tokens)
                and tokens[pos] not in ("|", "data")
                and _IDENT.fullmatch(tokens[pos])
            ):
                fields.append(tokens[pos])
                pos += 1
            ctors.append(ConstructorDecl(cname, tuple(fields)))
            if pos < len(tokens) and tokens[pos] == "|":
                pos += 1
                continue
            break
        decls.append(AdtDecl(name, tuple(ctors)))
    schema = Schema(decls)
    schema.validate()
    return schema


def load_schema(path) -> Schema:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_schema(fh.read())


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "=|":
            tokens.append(ch)
            i += 1
            continue
        m = _IDENT.match(text, i)
        if not m:
            raise SchemaError(f"unexpected character {ch!r} at offset {i}")
        tokens.append(m.group())
        i = m.end()
    return tokens


def _expect_ident(tokens: list[str], pos: int) -> str:
    if pos >= len(tokens) or not _IDENT.fullmatch(tokens[pos]):
        found = tokens[pos] if pos < len(tokens) else "end of input"
        raise SchemaError(f"expected an identifier, found {found!r}")
    if tokens[pos] == "data":
        raise SchemaError("'data' is a keyword, not a name")
    return tokens[pos]


def check_shape(schema: Schema, value: ValueTree) -> None:
    """Raise SchemaError unless ``value`` matches its claimed declaration."""
    decl = schema.adt(value.adt)
    if not 0 <= value.ordinal < len(decl.constructors):
        raise SchemaError(
            f"{value.adt} has no constructor ordinal {value.ordinal}"
        )
    ctor = decl.constructors[value.ordinal]
    if len(value.children) != len(ctor.fields):
        raise SchemaError(
            f"{value.adt}.{ctor.name} takes {len(ctor.fields)} field(s), "
            f"value has {len(value.children)}"
        )
    for ft, child in zip(ctor.fields, value.children):
        if ft == INT:
            if not isinstance(child, int):
                raise SchemaError(f"expected an int for {ft} field")
        else:
            if not isinstance(child, ValueTree) or child.adt != ft:
                raise SchemaError(f"expected a {ft} value")
            check_shape(schema, child)


def size_of(schema: Schema, value: ValueTree, layout: Layout) -> int:
    """Serialized byte length of ``value``, without materializing bytes."""
    ctor = schema.adt(value.adt).constructors[value.ordinal]
    n = len(ctor.fields)
    total = wire.TAG_WIDTH
    for i, (ft, child) in enumerate(zip(ctor.fields, value.children)):
        if wire.field_has_size_slot(layout, i, n):
            total += wire.FIELD_SIZE_WIDTH
        if ft == INT:
            total += wire.INT_WIDTH
        else:
            total += size_of(schema, child, layout)
    return total


def dynamic_pack(schema: Schema, root: ValueTree, layout: Layout) -> bytes:
    """Serialize ``root`` per the layout rules (interpretive path).

    Size slots are computed ahead of each field via ``size_of`` rather
    than backpatched.
    """
    out = bytearray()
    _pack_into(schema, root, layout, out)
    return bytes(out)


def _pack_into(
    schema: Schema, value: ValueTree, layout: Layout, out: bytearray
) -> None:
    ctor = schema.adt(value.adt).constructors[value.ordinal]
    n = len(ctor.fields)
    out += wire.encode_tag(value.ordinal)
    for i, (ft, child) in enumerate(zip(ctor.fields, value.children)):
        if ft == INT:
            if wire.field_has_size_slot(layout, i, n):
                out += wire.encode_field_size(wire.INT_WIDTH)
            out += wire.encode_int64(child)
        else:
            if wire.field_has_size_slot(layout, i, n):
                out += wire.encode_field_size(size_of(schema, child, layout))
            _pack_into(schema, child, layout, out)


def validate_buffer(
    schema: Schema, root_type: str, layout: Layout, data: bytes
) -> ValueTree:
    """Decode and structurally check exactly one packed value.

    Every tag must be in range, every size slot must equal the measured
    extent of its field, and the value must consume the whole buffer.
    Size slots are checked against the re-parsed field, never trusted
    for cursor motion, so arbitrary bytes cannot cause reads outside
    the buffer.
    """
    value, end = _decode_value(schema, root_type, layout, data, 0)
    if end != len(data):
        raise TrailingBytes(end, len(data) - end)
    return value


def _decode_value(
    schema: Schema, type_name: str, layout: Layout, data: bytes, offset: int
) -> tuple[ValueTree, int]:
    decl = schema.adt(type_name)
    ordinal = wire.decode_tag(data, offset, len(decl.constructors))
    pos = offset + wire.TAG_WIDTH
    ctor = decl.constructors[ordinal]
    n = len(ctor.fields)
    children: list[Union[int, ValueTree]] = []
    for i, ft in enumerate(ctor.fields):
        declared = None
        slot_at = pos
        if wire.field_has_size_slot(layout, i, n):
            declared = wire.decode_field_size(data, pos)
            pos += wire.FIELD_SIZE_WIDTH
        start = pos
        if ft == INT:
            children.append(wire.decode_int64(data, pos))
            pos += wire.INT_WIDTH
        else:
            child, pos = _decode_value(schema, ft, layout, data, pos)
            children.append(child)
        if declared is not None and declared != pos - start:
            raise FieldSizeMismatch(slot_at, expected=pos - start, found=declared)
    return ValueTree(type_name, ordinal, tuple(children)), pos


@dataclass(frozen=True)
class WireElement:
    """One annotated wire element for hex dumps."""

    offset: int
    raw: bytes
    kind: str  # "tag" | "size" | "int"
    meaning: str


def iter_wire_elements(
    schema: Schema, root_type: str, layout: Layout, data: bytes
) -> Iterator[WireElement]:
    """Yield every wire element of one packed value, in buffer order.

    Bounds and tag ranges are checked; size-slot values are reported
    as-is (validate first for full checking).
    """
    yield from _iter_elements(schema, root_type, layout, data, 0)


def _iter_elements(
    schema: Schema, type_name: str, layout: Layout, data: bytes, offset: int
):
    decl = schema.adt(type_name)
    ordinal = wire.decode_tag(data, offset, len(decl.constructors))
    ctor = decl.constructors[ordinal]
    yield WireElement(
        offset, data[offset : offset + 1], "tag", f"{type_name}.{ctor.name}"
    )
    pos = offset + wire.TAG_WIDTH
    n = len(ctor.fields)
    for i, ft in enumerate(ctor.fields):
        if wire.field_has_size_slot(layout, i, n):
            size = wire.decode_field_size(data, pos)
            yield WireElement(
                pos,
                data[pos : pos + wire.FIELD_SIZE_WIDTH],
                "size",
                f"field extent {size}",
            )
            pos += wire.FIELD_SIZE_WIDTH
        if ft == INT:
            value = wire.decode_int64(data, pos)
            yield WireElement(
                pos, data[pos : pos + wire.INT_WIDTH], "int", str(value)
            )
            pos += wire.INT_WIDTH
        else:
            pos = yield from _iter_elements(schema, ft, layout, data, pos)
    return pos


def element_end(schema: Schema, root_type: str, layout: Layout, data: bytes) -> int:
    """Offset one past the last byte of the value starting at offset 0."""
    _, end = _decode_value(schema, root_type, layout, data, 0)
    return end


def to_sexpr(schema: Schema, value: ValueTree) -> str:
    """Render ``(Node (Leaf 1) (Leaf 2))`` style text."""
    ctor = schema.adt(value.adt).constructors[value.ordinal]
    parts = [ctor.name]
    for child in value.children:
        if isinstance(child, ValueTree):
            parts.append(to_sexpr(schema, child))
        else:
            parts.append(str(child))
    return "(" + " ".join(parts) + ")"
