"""Packed algebraic data types: build, validate and traverse serialized
values in place, without a deserialization step.

A packed value is a constructor tag byte followed by its fields inlined
contiguously; under the indirect layouts a 32-bit size slot precedes
fields so traversals can jump over them. The write side is a typestate
``Builder`` that tracks the values still owed; the read side is a
``Cursor`` that consumes type obligations left to right. ``generate_api``
produces a per-ADT operation surface (pack/unpack/case/transform plus
per-constructor helpers) specialized to one layout.
"""

from .builder import Builder
from .codegen import AdtSurface, GeneratedApi, generate_api
from .errors import (
    FieldSizeMismatch,
    FieldTooLarge,
    InvalidTag,
    MalformedBuffer,
    OutOfBounds,
    PackedError,
    SchemaError,
    TrailingBytes,
    TypeStateViolation,
)
from .reader import (
    Cursor,
    Meter,
    PackedBuffer,
    RawCursor,
    from_bytes,
    run_reader,
    to_bytes,
)
from .schema import (
    AdtDecl,
    ConstructorDecl,
    Schema,
    ValueTree,
    dynamic_pack,
    load_schema,
    parse_schema,
    size_of,
    to_sexpr,
    validate_buffer,
)
from .wire import FIELD_SIZE, INT, Layout

__version__ = "0.1.0"

__all__ = [
    "AdtDecl",
    "AdtSurface",
    "Builder",
    "ConstructorDecl",
    "Cursor",
    "FIELD_SIZE",
    "FieldSizeMismatch",
    "FieldTooLarge",
    "GeneratedApi",
    "INT",
    "InvalidTag",
    "Layout",
    "MalformedBuffer",
    "Meter",
    "OutOfBounds",
    "PackedBuffer",
    "PackedError",
    "RawCursor",
    "Schema",
    "SchemaError",
    "TrailingBytes",
    "TypeStateViolation",
    "ValueTree",
    "dynamic_pack",
    "from_bytes",
    "generate_api",
    "load_schema",
    "parse_schema",
    "run_reader",
    "size_of",
    "to_bytes",
    "to_sexpr",
    "validate_buffer",
]
