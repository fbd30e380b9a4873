"""Command-line front end: generate, inspect, traverse and benchmark
packed files.

Packed files are headerless raw buffers; the schema, root type and
layout are supplied as arguments. Exit codes: 0 success, 2 bad
arguments, 3 I/O failure, 4 invalid buffer, 5 division by zero.
"""

from __future__ import annotations

import sys

import click

from . import bench as bench_mod
from .errors import MalformedBuffer, SchemaError
from .examples import ast as ast_ex
from .examples import trees as tree_ex
from .reader import from_bytes
from .schema import (
    dynamic_pack,
    iter_wire_elements,
    load_schema,
    to_sexpr,
    validate_buffer,
)
from .wire import Layout

EXIT_IO = 3
EXIT_INVALID = 4
EXIT_DIV_ZERO = 5

_LAYOUT_CHOICE = click.Choice([layout.value for layout in Layout])


def _read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _write_file(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _load_schema(path: str):
    try:
        return load_schema(path)
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    except SchemaError as exc:
        raise click.UsageError(f"bad schema: {exc}")


def _validated(schema, root_type: str, layout: Layout, data: bytes):
    try:
        return validate_buffer(schema, root_type, layout, data)
    except MalformedBuffer as exc:
        click.echo(f"invalid buffer: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_INVALID)
    except SchemaError as exc:
        raise click.UsageError(str(exc))


@click.group()
def main() -> None:
    """Build, validate, traverse and benchmark packed ADT buffers."""


@main.command("gen-tree")
@click.option("--depth", type=int, required=True, help="Symmetric tree depth.")
@click.option("--layout", type=_LAYOUT_CHOICE, default="plain", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def gen_tree(depth: int, layout: str, out_path: str) -> None:
    """Write a packed symmetric tree (leaf i carries value i)."""
    if not 0 <= depth <= tree_ex.MAX_DEPTH:
        raise click.UsageError(
            f"--depth must be in [0, {tree_ex.MAX_DEPTH}], got {depth}"
        )
    mode = Layout(layout)
    tree = tree_ex.gen_symmetric_tree(depth)
    value = tree_ex.tree_surface(mode).lift(tree)
    data = dynamic_pack(tree_ex.TREE_SCHEMA, value, mode)
    _write_file(out_path, data)
    click.echo(f"wrote {len(data)} bytes to {out_path}")


@main.command()
@click.option("--schema", "schema_path", required=True, type=click.Path(dir_okay=False))
@click.option("--type", "root_type", required=True)
@click.option("--layout", type=_LAYOUT_CHOICE, default="plain", show_default=True)
@click.argument("packedfile", type=click.Path(dir_okay=False))
def validate(schema_path: str, root_type: str, layout: str, packedfile: str) -> None:
    """Structurally check a packed file against a schema."""
    schema = _load_schema(schema_path)
    data = _read_file(packedfile)
    value = _validated(schema, root_type, Layout(layout), data)
    ctor = schema.adt(root_type).constructors[value.ordinal].name
    click.echo(f"ok: one {root_type} value ({ctor} at root), {len(data)} bytes")


@main.command()
@click.option("--schema", "schema_path", required=True, type=click.Path(dir_okay=False))
@click.option("--type", "root_type", required=True)
@click.option("--layout", type=_LAYOUT_CHOICE, default="plain", show_default=True)
@click.argument("packedfile", type=click.Path(dir_okay=False))
def dump(schema_path: str, root_type: str, layout: str, packedfile: str) -> None:
    """Print a packed file as an s-expression plus annotated hex."""
    schema = _load_schema(schema_path)
    data = _read_file(packedfile)
    mode = Layout(layout)
    value = _validated(schema, root_type, mode, data)
    click.echo(to_sexpr(schema, value))
    click.echo("")
    click.echo(f"{'offset':>8}  {'bytes':<24}  {'kind':<4}  meaning")
    for element in iter_wire_elements(schema, root_type, mode, data):
        click.echo(
            f"{element.offset:>8}  {element.raw.hex(' '):<24}  "
            f"{element.kind:<4}  {element.meaning}"
        )


@main.command()
@click.argument(
    "operation", type=click.Choice(["sum", "eval", "rightmost", "increment"])
)
@click.argument("packedfile", type=click.Path(dir_okay=False))
@click.option("--layout", type=_LAYOUT_CHOICE, default="plain", show_default=True)
@click.option(
    "--use-indirections",
    is_flag=True,
    help="rightmost only: jump over left subtrees via size slots.",
)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def traverse(
    operation: str,
    packedfile: str,
    layout: str,
    use_indirections: bool,
    out_path: str | None,
) -> None:
    """Run a traversal directly on a packed file.

    sum/rightmost/increment read packed Tree files, eval reads packed
    Ast files. increment writes the incremented buffer to --out.
    """
    mode = Layout(layout)
    if use_indirections and operation != "rightmost":
        raise click.UsageError("--use-indirections only applies to rightmost")
    if use_indirections and mode is Layout.PLAIN:
        raise click.UsageError("--use-indirections requires an indirect layout")
    if operation == "increment" and out_path is None:
        raise click.UsageError("increment requires --out")
    data = _read_file(packedfile)

    if operation == "eval":
        _validated(ast_ex.AST_SCHEMA, "Ast", mode, data)
        packed = from_bytes(data, ("Ast",))
        try:
            click.echo(ast_ex.eval_packed(packed, mode))
        except ZeroDivisionError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DIV_ZERO)
        return

    _validated(tree_ex.TREE_SCHEMA, "Tree", mode, data)
    packed = from_bytes(data, ("Tree",))
    if operation == "sum":
        click.echo(tree_ex.sum_packed(packed, mode))
    elif operation == "rightmost":
        if use_indirections:
            click.echo(tree_ex.rightmost_packed_indirect(packed, mode))
        else:
            click.echo(tree_ex.rightmost_packed_plain(packed, mode))
    else:
        result = tree_ex.increment_packed(packed, mode)
        _write_file(out_path, result.data)
        click.echo(f"wrote {len(result.data)} bytes to {out_path}")


def _parse_depths(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise click.UsageError(f"bad depth list {text!r}")


def _parse_layouts(text: str) -> tuple[Layout, ...]:
    if text == "all":
        return tuple(Layout)
    try:
        return tuple(Layout(part.strip()) for part in text.split(","))
    except ValueError:
        raise click.UsageError(f"bad layout list {text!r}")


@main.command()
@click.option("--suite", type=click.Choice(bench_mod.SUITES), required=True)
@click.option("--depths", default="4,8,12", show_default=True,
              help="Comma-separated tree depths.")
@click.option("--layouts", default="all", show_default=True,
              help="Comma-separated layouts, or 'all'.")
@click.option("--warmup", type=int, default=3, show_default=True)
@click.option("--iters", type=int, default=20, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "csv"]),
              default="table", show_default=True)
def bench(suite, depths, layouts, warmup, iters, fmt) -> None:
    """Time the traversal suites over pre-built buffers."""
    config = bench_mod.BenchConfig(
        suite=suite,
        depths=_parse_depths(depths),
        layouts=_parse_layouts(layouts),
        warmup_iters=warmup,
        measured_iters=iters,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    records = bench_mod.run_bench(config)
    if fmt == "csv":
        bench_mod.write_csv(records, sys.stdout)
    else:
        bench_mod.render_table(records, sys.stdout)


if __name__ == "__main__":
    main()
