"""Generated per-ADT operation surfaces, specialized to one layout.

``generate_api`` plays the role a compile-time code generator would in
a statically typed host: for every ADT it builds an ``AdtSurface``
holding pack/write/unpack, a ``case`` pattern-match surrogate, a
``transform`` copy-and-rewrite surrogate, and per-constructor
``start_<ctor>`` / ``write_<ctor>`` helpers, all closed over the layout
at generation time. Generating against two layouts yields two
independent surfaces that coexist; a buffer must be traversed with the
surface matching the layout it was packed with.

Native values are either ``ValueTree`` (the default) or user classes
bound per constructor via the ``natives`` mapping; bound classes must
be dataclasses whose field order matches the declaration.
"""

from __future__ import annotations

import dataclasses
import re
from typing import Any, Callable, Mapping, Sequence

from .builder import Builder
from .errors import InvalidTag, OutOfBounds, SchemaError, TypeStateViolation
from .reader import Cursor, PackedBuffer
from .schema import Schema, ValueTree
from .wire import FIELD_SIZE, INT, Layout

_CAMEL_BOUNDARY = re.compile(r"(?<!^)(?=[A-Z])")


def _snake(name: str) -> str:
    return _CAMEL_BOUNDARY.sub("_", name).lower()


class AdtSurface:
    """Operations for one ADT under one layout.

    ``case`` and ``transform`` are built as specialized closures at
    generation time (the ADT's name, constructor count and reader
    surfaces live in their cells), so the per-dispatch work is one flat
    function that touches the cursor's internals directly — the same
    shape hand-generated code for this ADT would have.
    """

    def __init__(
        self,
        api: "GeneratedApi",
        name: str,
        native_classes: Sequence[type] | None,
    ):
        self._api = api
        self._name = name
        self._decl = api.schema.adt(name)
        table = api.schema.layout_tables(api.layout)[name]
        self._surfaces = table.reader
        self._surfaces_rev = table.reader_rev
        self._writer = table.writer
        self._classes = tuple(native_classes) if native_classes else None
        if self._classes is not None:
            self._bind_natives()
        self.case = self._gen_case()
        self.transform = self._gen_transform()
        self._install_ctor_helpers()

    @property
    def name(self) -> str:
        return self._name

    @property
    def layout(self) -> Layout:
        return self._api.layout

    def constructor_surface(self, ordinal: int) -> tuple[str, ...]:
        """Obligations a case continuation sees for this constructor."""
        return self._surfaces[ordinal]

    def _bind_natives(self) -> None:
        if len(self._classes) != len(self._decl.constructors):
            raise SchemaError(
                f"{self._name} declares {len(self._decl.constructors)} "
                f"constructor(s) but {len(self._classes)} class(es) were bound"
            )
        self._ordinal_of_class: dict[type, int] = {}
        self._accessors: list[tuple[str, ...]] = []
        for ordinal, (ctor, cls) in enumerate(
            zip(self._decl.constructors, self._classes)
        ):
            if not dataclasses.is_dataclass(cls):
                raise SchemaError(f"{cls.__name__} must be a dataclass")
            names = tuple(f.name for f in dataclasses.fields(cls))
            if len(names) != len(ctor.fields):
                raise SchemaError(
                    f"{cls.__name__} has {len(names)} field(s), "
                    f"{self._name}.{ctor.name} declares {len(ctor.fields)}"
                )
            self._ordinal_of_class[cls] = ordinal
            self._accessors.append(names)

    def _destructure(self, x: Any) -> tuple[int, tuple]:
        if self._classes is None:
            if not isinstance(x, ValueTree) or x.adt != self._name:
                raise TypeStateViolation(
                    f"expected a {self._name} ValueTree, got {x!r}"
                )
            return x.ordinal, x.children
        ordinal = self._ordinal_of_class.get(type(x))
        if ordinal is None:
            raise TypeStateViolation(
                f"{type(x).__name__} is not a constructor of {self._name}"
            )
        names = self._accessors[ordinal]
        return ordinal, tuple(getattr(x, n) for n in names)

    def _construct(self, ordinal: int, children: Sequence) -> Any:
        if self._classes is None:
            return ValueTree(self._name, ordinal, tuple(children))
        return self._classes[ordinal](*children)

    # -- write path ----------------------------------------------------

    def write(self, builder: Builder, x: Any) -> Builder:
        """Pack a native value against the head obligation.

        Byte-identical to the equivalent start/write call sequence.
        """
        ordinal, children = self._destructure(x)
        builder.start_ctor(self._name, ordinal)
        for ft, child in zip(
            self._decl.constructors[ordinal].fields, children
        ):
            if ft == INT:
                builder.write_prim(child)
            else:
                self._api[ft].write(builder, child)
        return builder

    def pack(self, x: Any) -> PackedBuffer:
        """Serialize one native value into a fresh packed buffer."""
        builder = Builder(self._api.schema, (self._name,), self._api.layout)
        return self.write(builder, x).finish()

    # -- read path -----------------------------------------------------

    def unpack(self, cursor: Cursor) -> tuple[Any, Cursor]:
        """Reconstruct the native value at the cursor, consuming it fully."""
        ordinal, cursor = cursor._case_step(self._name, self._surfaces)
        children = []
        for tok in self._surfaces[ordinal]:
            if tok == FIELD_SIZE:
                cursor = cursor.skip_field_size()
            elif tok == INT:
                child, cursor = cursor.read_prim()
                children.append(child)
            else:
                child, cursor = self._api[tok].unpack(cursor)
                children.append(child)
        return self._construct(ordinal, children), cursor

    def read(self, packed: PackedBuffer) -> Any:
        """Unpack a single-value buffer in one call."""
        value, _ = self.unpack(packed.cursor())
        return value

    def _gen_case(self):
        name = self._name
        surfaces_rev = self._surfaces_rev
        n = len(surfaces_rev)
        make = Cursor

        def case(cursor: Cursor, *continuations) -> tuple[Any, Cursor]:
            """Pattern-match surrogate: read the tag, run one continuation.

            Continuations are positional, one per constructor in
            declaration order; each receives a cursor whose obligations
            are that constructor's field sequence under this layout
            (size slots interleaved), followed by the outer suffix, and
            returns a ``(result, cursor)`` pair.
            """
            if len(continuations) != n:
                raise TypeError(
                    f"{name} has {n} constructor(s), "
                    f"got {len(continuations)} continuation(s)"
                )
            rem = cursor._rem
            if rem is None or rem[0] != name:
                cursor._raise_mismatch(name)
            data = cursor._data
            pos = cursor._pos
            if pos >= len(data):
                raise OutOfBounds(pos, 1, 0)
            ordinal = data[pos]
            if ordinal >= n:
                raise InvalidTag(pos, ordinal, n)
            meter = cursor._meter
            if meter is not None:
                meter.bytes_consumed += 1
            tail = rem[1]
            for tok in surfaces_rev[ordinal]:
                tail = (tok, tail)
            return continuations[ordinal](make(data, pos + 1, tail, meter))

        return case

    def _gen_transform(self):
        name = self._name
        surfaces_rev = self._surfaces_rev
        n = len(surfaces_rev)
        make = Cursor

        def transform(
            cursor: Cursor, builder: Builder, *continuations
        ) -> tuple[Cursor, Builder]:
            """Copy-and-rewrite surrogate: like ``case``, but also
            writes the matched constructor's tag (opening its size-slot
            frames) to the builder before running the continuation.

            Continuations take ``(cursor, builder)``, must consume the
            constructor's input fields while discharging the matching
            output obligations, and return the advanced ``(cursor,
            builder)`` pair.
            """
            if len(continuations) != n:
                raise TypeError(
                    f"{name} has {n} constructor(s), "
                    f"got {len(continuations)} continuation(s)"
                )
            rem = cursor._rem
            if rem is None or rem[0] != name:
                cursor._raise_mismatch(name)
            data = cursor._data
            pos = cursor._pos
            if pos >= len(data):
                raise OutOfBounds(pos, 1, 0)
            ordinal = data[pos]
            if ordinal >= n:
                raise InvalidTag(pos, ordinal, n)
            meter = cursor._meter
            if meter is not None:
                meter.bytes_consumed += 1
            builder.start_ctor(name, ordinal)
            tail = rem[1]
            for tok in surfaces_rev[ordinal]:
                tail = (tok, tail)
            return continuations[ordinal](
                make(data, pos + 1, tail, meter), builder
            )

        return transform

    # -- value lifting ---------------------------------------------------

    def lift(self, x: Any) -> ValueTree:
        """Native value to its interpretive ValueTree twin."""
        ordinal, children = self._destructure(x)
        lifted = tuple(
            child if ft == INT else self._api[ft].lift(child)
            for ft, child in zip(
                self._decl.constructors[ordinal].fields, children
            )
        )
        return ValueTree(self._name, ordinal, lifted)

    def lower(self, value: ValueTree) -> Any:
        """ValueTree back to the bound native representation."""
        if value.adt != self._name:
            raise TypeStateViolation(f"expected a {self._name} ValueTree")
        children = tuple(
            child if ft == INT else self._api[ft].lower(child)
            for ft, child in zip(
                self._decl.constructors[value.ordinal].fields, value.children
            )
        )
        return self._construct(value.ordinal, children)

    # -- generated per-constructor helpers -------------------------------

    def _install_ctor_helpers(self) -> None:
        taken: set[str] = set()
        for ordinal, ctor in enumerate(self._decl.constructors):
            snake = _snake(ctor.name)
            if snake in taken:
                raise SchemaError(
                    f"constructors of {self._name} collide on {snake!r}"
                )
            taken.add(snake)
            setattr(self, f"start_{snake}", self._make_start(ordinal))
            setattr(self, f"write_{snake}", self._make_write(ordinal))

    def _make_start(self, ordinal: int) -> Callable[[Builder], Builder]:
        def start(builder: Builder) -> Builder:
            return builder.start_ctor(self._name, ordinal)

        start.__name__ = f"start_{_snake(self._decl.constructors[ordinal].name)}"
        return start

    def _make_write(self, ordinal: int) -> Callable[..., Builder]:
        fields = self._decl.constructors[ordinal].fields

        def write_ctor(builder: Builder, *children) -> Builder:
            if len(children) != len(fields):
                raise TypeError(
                    f"constructor takes {len(fields)} field value(s), "
                    f"got {len(children)}"
                )
            builder.start_ctor(self._name, ordinal)
            for ft, child in zip(fields, children):
                if ft == INT:
                    builder.write_prim(child)
                else:
                    self._api[ft].write(builder, child)
            return builder

        write_ctor.__name__ = (
            f"write_{_snake(self._decl.constructors[ordinal].name)}"
        )
        return write_ctor


class GeneratedApi:
    """All ADT surfaces generated for one (schema, layout) pair."""

    def __init__(
        self,
        schema: Schema,
        layout: Layout,
        natives: Mapping[str, Sequence[type]] | None = None,
    ):
        schema.validate()
        natives = natives or {}
        for name in natives:
            schema.adt(name)  # unknown names fail generation
        self.schema = schema
        self.layout = layout
        self._surfaces = {
            decl.name: AdtSurface(self, decl.name, natives.get(decl.name))
            for decl in schema.adts
        }

    def __getitem__(self, adt_name: str) -> AdtSurface:
        return self._surfaces[adt_name]

    def __contains__(self, adt_name: str) -> bool:
        return adt_name in self._surfaces

    def new_builder(self, types: Sequence[str]) -> Builder:
        """A builder owing ``types``, specialized to this layout."""
        return Builder(self.schema, types, self.layout)


def generate_api(
    schema: Schema,
    layout: Layout,
    natives: Mapping[str, Sequence[type]] | None = None,
) -> GeneratedApi:
    """Generate the full operation surface for a schema under one layout."""
    return GeneratedApi(schema, layout, natives)
