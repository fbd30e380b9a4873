"""Binary trees with integer leaves: natives, generators and traversals.

The packed traversals come in checked (cursor + obligations) and raw
(offset arithmetic) variants, plus the unpack-then-process baselines
they are benchmarked against. Every packed operation takes the layout
the buffer was packed with; a buffer does not record it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union

from ..builder import Builder
from ..codegen import AdtSurface, GeneratedApi, generate_api
from ..errors import InvalidTag
from ..reader import Meter, PackedBuffer, RawCursor, run_reader
from ..schema import Schema, parse_schema
from ..wire import Layout
from .numeric import wrap64

MAX_DEPTH = 30


@dataclass(frozen=True, slots=True)
class Leaf:
    value: int


@dataclass(frozen=True, slots=True)
class Node:
    left: "Tree"
    right: "Tree"


Tree = Union[Leaf, Node]

TREE_SCHEMA: Schema = parse_schema("data Tree = Leaf Int | Node Tree Tree")

_apis: dict[Layout, GeneratedApi] = {}


def tree_api(layout: Layout) -> GeneratedApi:
    api = _apis.get(layout)
    if api is None:
        api = generate_api(TREE_SCHEMA, layout, natives={"Tree": (Leaf, Node)})
        _apis[layout] = api
    return api


def tree_surface(layout: Layout) -> AdtSurface:
    return tree_api(layout)["Tree"]


def pack_tree(tree: Tree, layout: Layout) -> PackedBuffer:
    return tree_surface(layout).pack(tree)


def unpack_tree(packed: PackedBuffer, layout: Layout) -> Tree:
    return tree_surface(layout).read(packed)


# -- generators ----------------------------------------------------------


def gen_symmetric_tree(depth: int) -> Tree:
    """Full binary tree; leaf i (left to right, 0-based) carries value i."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}], got {depth}")

    def build(d: int, base: int) -> Tree:
        if d == 0:
            return Leaf(base)
        return Node(build(d - 1, base), build(d - 1, base + (1 << (d - 1))))

    return build(depth, 0)


def gen_random_tree(seed: int, max_depth: int) -> Tree:
    """Deterministic random tree; uniform constructor choice, leaves
    forced at max_depth, payloads in [-1000, 1000]."""
    rng = random.Random(seed)

    def build(d: int) -> Tree:
        if d == 0 or rng.randrange(2) == 0:
            return Leaf(rng.randint(-1000, 1000))
        return Node(build(d - 1), build(d - 1))

    return build(max_depth)


# -- native traversals ---------------------------------------------------


def sum_native(tree: Tree) -> int:
    if type(tree) is Leaf:
        return tree.value
    return sum_native(tree.left) + sum_native(tree.right)


def rightmost_native(tree: Tree) -> int:
    while type(tree) is Node:
        tree = tree.right
    return tree.value


def increment_native(tree: Tree) -> Tree:
    """Structurally identical tree with every leaf value + 1 (wrapped)."""
    if type(tree) is Leaf:
        return Leaf(wrap64(tree.value + 1))
    return Node(increment_native(tree.left), increment_native(tree.right))


# -- checked packed traversals -------------------------------------------


def sum_packed(
    packed: PackedBuffer, layout: Layout, meter: Meter | None = None
) -> int:
    """Sum the leaves directly on the buffer; size slots are skipped,
    never jumped, so the whole value is traversed."""
    case = tree_surface(layout).case

    if layout is Layout.PLAIN:

        def on_leaf(c):
            return c.read_prim()

        def on_node(c):
            a, c = go(c)
            b, c = go(c)
            return a + b, c

    else:
        # slot obligations sit before (some) fields and must be skipped
        def on_leaf(c):
            return c.skip_field_sizes().read_prim()

        def on_node(c):
            a, c = go(c.skip_field_sizes())
            b, c = go(c.skip_field_sizes())
            return a + b, c

    def go(c):
        return case(c, on_leaf, on_node)

    total, _ = run_reader(packed, go, meter)
    return total


def rightmost_packed_plain(
    packed: PackedBuffer, layout: Layout, meter: Meter | None = None
) -> int:
    """Right-spine value by reading through every left subtree.

    Works under any layout (size slots are skipped, not used); consumes
    the value's full extent.
    """
    case = tree_surface(layout).case

    if layout is Layout.PLAIN:

        def on_leaf(c):
            return c.read_prim()

        def on_node(c):
            _, c = go(c)
            return go(c)

    else:

        def on_leaf(c):
            return c.skip_field_sizes().read_prim()

        def on_node(c):
            _, c = go(c.skip_field_sizes())
            return go(c.skip_field_sizes())

    def go(c):
        return case(c, on_leaf, on_node)

    value, _ = run_reader(packed, go, meter)
    return value


def rightmost_packed_indirect(
    packed: PackedBuffer, layout: Layout, meter: Meter | None = None
) -> int:
    """Right-spine value by jumping over left subtrees via their size
    slots; consumes O(depth) bytes instead of the whole buffer."""
    if layout is Layout.PLAIN:
        raise ValueError("jumping traversal needs a layout with size slots")
    case = tree_surface(layout).case

    def on_leaf(c):
        return c.skip_field_sizes().read_prim()

    def on_node(c):
        size, c = c.read_field_size()
        c = c.jump_over_field(size)
        return go(c.skip_field_sizes())

    def go(c):
        return case(c, on_leaf, on_node)

    value, _ = run_reader(packed, go, meter)
    return value


def increment_packed(packed: PackedBuffer, layout: Layout) -> PackedBuffer:
    """Packed-to-packed increment of every leaf, via transform.

    The output buffer has the same byte length as the input (same
    shape, fixed-width payloads).
    """
    surface = tree_surface(layout)
    transform = surface.transform

    if layout is Layout.PLAIN:

        def on_leaf(c, b):
            v, c = c.read_prim()
            return c, b.write_prim(wrap64(v + 1))

        def on_node(c, b):
            c, b = go(c, b)
            return go(c, b)

    else:

        def on_leaf(c, b):
            v, c = c.skip_field_sizes().read_prim()
            return c, b.write_prim(wrap64(v + 1))

        def on_node(c, b):
            c, b = go(c.skip_field_sizes(), b)
            c, b = go(c.skip_field_sizes(), b)
            return c, b

    def go(c, b):
        return transform(c, b, on_leaf, on_node)

    builder = tree_api(layout).new_builder(("Tree",))
    _, builder = go(packed.cursor(), builder)
    return builder.finish()


# -- raw (unchecked) packed traversals -------------------------------------


def _slot_widths(layout: Layout) -> tuple[int, int, int]:
    # (before leaf value, before first node field, before last node field)
    if layout is Layout.PLAIN:
        return 0, 0, 0
    if layout is Layout.INDIRECT:
        return 4, 4, 4
    return 0, 4, 0


def sum_packed_raw(packed: PackedBuffer, layout: Layout) -> int:
    leaf_skip, first_skip, last_skip = _slot_widths(layout)
    cur = RawCursor(packed.data)

    def go() -> int:
        tag = cur.read_tag()
        if tag == 0:
            cur.skip(leaf_skip)
            return cur.read_int()
        if tag != 1:
            raise InvalidTag(cur.pos - 1, tag, 2)
        cur.skip(first_skip)
        a = go()
        cur.skip(last_skip)
        return a + go()

    return go()


def rightmost_packed_raw(packed: PackedBuffer, layout: Layout) -> int:
    """Raw right-spine lookup; jumps via size slots when the layout has
    them, otherwise reads through left subtrees."""
    leaf_skip, first_skip, last_skip = _slot_widths(layout)
    jumping = layout is not Layout.PLAIN
    cur = RawCursor(packed.data)

    def go() -> int:
        tag = cur.read_tag()
        if tag == 0:
            cur.skip(leaf_skip)
            return cur.read_int()
        if tag != 1:
            raise InvalidTag(cur.pos - 1, tag, 2)
        if jumping:
            cur.skip(cur.read_size())
        else:
            cur.skip(first_skip)
            go()
        cur.skip(last_skip)
        return go()

    return go()


# -- unpack-then-process baselines -----------------------------------------


def unpack_then_sum(packed: PackedBuffer, layout: Layout) -> int:
    return sum_native(unpack_tree(packed, layout))


def unpack_then_rightmost(packed: PackedBuffer, layout: Layout) -> int:
    return rightmost_native(unpack_tree(packed, layout))


def unpack_increment_repack(packed: PackedBuffer, layout: Layout) -> PackedBuffer:
    """Deserialize, increment the native tree, then serialize again."""
    return pack_tree(increment_native(unpack_tree(packed, layout)), layout)


def case_increment_then_pack(packed: PackedBuffer, layout: Layout) -> PackedBuffer:
    """Build the incremented native tree inside the case continuations
    (one traversal of the buffer), then pack it."""
    case = tree_surface(layout).case

    if layout is Layout.PLAIN:

        def on_leaf(c):
            v, c = c.read_prim()
            return Leaf(wrap64(v + 1)), c

        def on_node(c):
            left, c = go(c)
            right, c = go(c)
            return Node(left, right), c

    else:

        def on_leaf(c):
            v, c = c.skip_field_sizes().read_prim()
            return Leaf(wrap64(v + 1)), c

        def on_node(c):
            left, c = go(c.skip_field_sizes())
            right, c = go(c.skip_field_sizes())
            return Node(left, right), c

    def go(c):
        return case(c, on_leaf, on_node)

    tree, _ = run_reader(packed, go)
    return pack_tree(tree, layout)
