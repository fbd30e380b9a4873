"""A small arithmetic language: integer values and four binary operators.

Evaluation is wrapping 64-bit arithmetic with truncated-toward-zero
division; dividing by zero raises ZeroDivisionError from native and
packed evaluators alike.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union

from ..codegen import AdtSurface, GeneratedApi, generate_api
from ..errors import InvalidTag
from ..reader import Meter, PackedBuffer, RawCursor, run_reader
from ..schema import Schema, parse_schema
from ..wire import Layout
from .numeric import trunc_div64, wrap64


@dataclass(frozen=True, slots=True)
class Value:
    value: int


@dataclass(frozen=True, slots=True)
class Add:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True, slots=True)
class Sub:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True, slots=True)
class Mul:
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True, slots=True)
class Div:
    left: "Ast"
    right: "Ast"


Ast = Union[Value, Add, Sub, Mul, Div]

AST_SCHEMA: Schema = parse_schema(
    "data Ast = Value Int | Add Ast Ast | Sub Ast Ast | Mul Ast Ast | Div Ast Ast"
)

_apis: dict[Layout, GeneratedApi] = {}


def ast_api(layout: Layout) -> GeneratedApi:
    api = _apis.get(layout)
    if api is None:
        api = generate_api(
            AST_SCHEMA, layout, natives={"Ast": (Value, Add, Sub, Mul, Div)}
        )
        _apis[layout] = api
    return api


def ast_surface(layout: Layout) -> AdtSurface:
    return ast_api(layout)["Ast"]


def pack_ast(ast: Ast, layout: Layout) -> PackedBuffer:
    return ast_surface(layout).pack(ast)


def unpack_ast(packed: PackedBuffer, layout: Layout) -> Ast:
    return ast_surface(layout).read(packed)


def gen_random_ast(seed: int, max_depth: int) -> Ast:
    """Deterministic random AST; uniform constructor choice, values
    forced at max_depth, payloads in [-1000, 1000]. Right operands of
    Div are re-rolled until they evaluate to nonzero, so evaluation is
    total."""
    rng = random.Random(seed)

    def build(d: int) -> Ast:
        kind = 0 if d == 0 else rng.randrange(5)
        if kind == 0:
            return Value(rng.randint(-1000, 1000))
        left = build(d - 1)
        right = build(d - 1)
        if kind == 4:
            while eval_native(right) == 0:
                right = build(d - 1)
            return Div(left, right)
        return (Add, Sub, Mul)[kind - 1](left, right)

    return build(max_depth)


def eval_native(ast: Ast) -> int:
    t = type(ast)
    if t is Value:
        return ast.value
    a = eval_native(ast.left)
    b = eval_native(ast.right)
    if t is Add:
        return wrap64(a + b)
    if t is Sub:
        return wrap64(a - b)
    if t is Mul:
        return wrap64(a * b)
    return trunc_div64(a, b)


def eval_packed(
    packed: PackedBuffer, layout: Layout, meter: Meter | None = None
) -> int:
    """Evaluate directly on the buffer: a full traversal, like summing,
    but dispatching over five constructors."""
    case = ast_surface(layout).case
    plain = layout is Layout.PLAIN

    if plain:

        def on_value(c):
            return c.read_prim()

        def binop(op):
            def k(c):
                a, c = go(c)
                b, c = go(c)
                return op(a, b), c

            return k

    else:

        def on_value(c):
            return c.skip_field_sizes().read_prim()

        def binop(op):
            def k(c):
                a, c = go(c.skip_field_sizes())
                b, c = go(c.skip_field_sizes())
                return op(a, b), c

            return k

    ks = (
        on_value,
        binop(lambda a, b: wrap64(a + b)),
        binop(lambda a, b: wrap64(a - b)),
        binop(lambda a, b: wrap64(a * b)),
        binop(trunc_div64),
    )

    def go(c):
        return case(c, *ks)

    result, _ = run_reader(packed, go, meter)
    return result


def eval_packed_raw(packed: PackedBuffer, layout: Layout) -> int:
    if layout is Layout.PLAIN:
        value_skip = first_skip = last_skip = 0
    elif layout is Layout.INDIRECT:
        value_skip = first_skip = last_skip = 4
    else:
        value_skip, first_skip, last_skip = 0, 4, 0
    cur = RawCursor(packed.data)

    def go() -> int:
        tag = cur.read_tag()
        if tag == 0:
            cur.skip(value_skip)
            return cur.read_int()
        if tag > 4:
            raise InvalidTag(cur.pos - 1, tag, 5)
        cur.skip(first_skip)
        a = go()
        cur.skip(last_skip)
        b = go()
        if tag == 1:
            return wrap64(a + b)
        if tag == 2:
            return wrap64(a - b)
        if tag == 3:
            return wrap64(a * b)
        return trunc_div64(a, b)

    return go()


def unpack_then_eval(packed: PackedBuffer, layout: Layout) -> int:
    """The conventional pipeline: deserialize, then evaluate natively."""
    return eval_native(unpack_ast(packed, layout))
