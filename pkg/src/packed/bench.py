"""Benchmark harness: four traversal suites timed over pre-built buffers.

Buffers and native inputs are built outside the timed region; every
timed run's result is fed through a sink so the traversal has a visible
data dependency. Timing uses the monotonic nanosecond clock with
warmup runs discarded, and reports median, mean and standard deviation.
Byte-consumption instrumentation adds cursor overhead, so counted runs
are separate from timed ones.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Iterator, TextIO

from .examples import ast as ast_ex
from .examples import trees as tree_ex
from .reader import Meter, PackedBuffer
from .wire import Layout

SUITES = ("sum", "ast", "rightmost", "increment")

VARIANT_NATIVE = "native"
VARIANT_CHECKED = "packed-checked"
VARIANT_RAW = "packed-raw"
VARIANT_UNPACK = "unpack-then-process"
VARIANT_DESER_INC = "deserialise-and-increment"

CSV_HEADER = (
    "suite",
    "variant",
    "layout",
    "depth",
    "median_ns",
    "mean_ns",
    "stddev_ns",
    "bytes_consumed",
)

_AST_SEED_BASE = 9000


@dataclass
class BenchConfig:
    suite: str
    depths: tuple[int, ...] = (4, 8, 12)
    layouts: tuple[Layout, ...] = tuple(Layout)
    warmup_iters: int = 3
    measured_iters: int = 20

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.measured_iters < 3:
            raise ValueError("measured_iters must be at least 3")
        if self.warmup_iters < 0:
            raise ValueError("warmup_iters must be non-negative")
        if not self.depths:
            raise ValueError("at least one depth is required")
        for d in self.depths:
            if not 0 <= d <= tree_ex.MAX_DEPTH:
                raise ValueError(
                    f"depth must be in [0, {tree_ex.MAX_DEPTH}], got {d}"
                )
        if not self.layouts:
            raise ValueError("at least one layout is required")


@dataclass
class BenchRecord:
    suite: str
    variant: str
    layout: Layout
    depth: int
    median_ns: float
    mean_ns: float
    stddev_ns: float
    bytes_consumed: int | None = None

    def row(self) -> tuple:
        return (
            self.suite,
            self.variant,
            str(self.layout),
            self.depth,
            round(self.median_ns),
            round(self.mean_ns),
            round(self.stddev_ns, 1),
            "" if self.bytes_consumed is None else self.bytes_consumed,
        )


class _Sink:
    """Accumulates a token derived from every result, so no timed run
    is dead code."""

    def __init__(self) -> None:
        self.token = 0

    def feed(self, result) -> None:
        if isinstance(result, int):
            self.token ^= result
        elif isinstance(result, PackedBuffer):
            self.token ^= len(result.data) ^ result.data[0]
        else:
            self.token ^= id(result)


_sink = _Sink()


def _time_runs(
    thunk: Callable[[], object], warmup: int, iters: int
) -> tuple[float, float, float]:
    for _ in range(warmup):
        _sink.feed(thunk())
    samples = []
    for _ in range(iters):
        start = time.perf_counter_ns()
        result = thunk()
        elapsed = time.perf_counter_ns() - start
        _sink.feed(result)
        samples.append(elapsed)
    return (
        statistics.median(samples),
        statistics.fmean(samples),
        statistics.stdev(samples),
    )


def _tree_variants(suite: str, native, packed, layout: Layout) -> list:
    if suite == "sum":
        return [
            (VARIANT_NATIVE, lambda: tree_ex.sum_native(native), None),
            (
                VARIANT_CHECKED,
                lambda: tree_ex.sum_packed(packed, layout),
                None,
            ),
            (VARIANT_RAW, lambda: tree_ex.sum_packed_raw(packed, layout), None),
            (
                VARIANT_UNPACK,
                lambda: tree_ex.unpack_then_sum(packed, layout),
                None,
            ),
        ]
    if suite == "rightmost":
        if layout is Layout.PLAIN:
            checked = lambda m=None: tree_ex.rightmost_packed_plain(
                packed, layout, m
            )
        else:
            checked = lambda m=None: tree_ex.rightmost_packed_indirect(
                packed, layout, m
            )
        return [
            (VARIANT_NATIVE, lambda: tree_ex.rightmost_native(native), None),
            (VARIANT_CHECKED, checked, checked),
            (
                VARIANT_RAW,
                lambda: tree_ex.rightmost_packed_raw(packed, layout),
                None,
            ),
            (
                VARIANT_UNPACK,
                lambda: tree_ex.unpack_then_rightmost(packed, layout),
                None,
            ),
        ]
    if suite == "increment":
        return [
            (VARIANT_NATIVE, lambda: tree_ex.increment_native(native), None),
            (
                VARIANT_CHECKED,
                lambda: tree_ex.increment_packed(packed, layout),
                None,
            ),
            (
                VARIANT_UNPACK,
                lambda: tree_ex.unpack_increment_repack(packed, layout),
                None,
            ),
            (
                VARIANT_DESER_INC,
                lambda: tree_ex.case_increment_then_pack(packed, layout),
                None,
            ),
        ]
    raise ValueError(suite)


def _ast_variants(native, packed, layout: Layout) -> list:
    return [
        (VARIANT_NATIVE, lambda: ast_ex.eval_native(native), None),
        (VARIANT_CHECKED, lambda: ast_ex.eval_packed(packed, layout), None),
        (VARIANT_RAW, lambda: ast_ex.eval_packed_raw(packed, layout), None),
        (VARIANT_UNPACK, lambda: ast_ex.unpack_then_eval(packed, layout), None),
    ]


def run_bench(config: BenchConfig) -> Iterator[BenchRecord]:
    """Run every (depth, layout, variant) cell sequentially."""
    config.validate()
    for depth in config.depths:
        if config.suite == "ast":
            native = ast_ex.gen_random_ast(_AST_SEED_BASE + depth, depth)
            for layout in config.layouts:
                packed = ast_ex.pack_ast(native, layout)
                variants = _ast_variants(native, packed, layout)
                yield from _run_cell(config, depth, layout, variants)
        else:
            native = tree_ex.gen_symmetric_tree(depth)
            for layout in config.layouts:
                packed = tree_ex.pack_tree(native, layout)
                variants = _tree_variants(config.suite, native, packed, layout)
                yield from _run_cell(config, depth, layout, variants)


def _run_cell(
    config: BenchConfig, depth: int, layout: Layout, variants
) -> Iterator[BenchRecord]:
    for name, thunk, counted in variants:
        median, mean, stddev = _time_runs(
            thunk, config.warmup_iters, config.measured_iters
        )
        consumed = None
        if counted is not None:
            meter = Meter()
            _sink.feed(counted(meter))
            consumed = meter.bytes_consumed
        yield BenchRecord(
            config.suite, name, layout, depth, median, mean, stddev, consumed
        )


def write_csv(records, out: TextIO) -> None:
    writer = csv.writer(out)
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.row())


def render_table(records, out: TextIO) -> None:
    widths = (10, 26, 19, 6, 12, 12, 12, 15)
    header = "  ".join(h.ljust(w) for h, w in zip(CSV_HEADER, widths))
    out.write(header.rstrip() + "\n")
    out.write("-" * len(header.rstrip()) + "\n")
    for record in records:
        cells = [str(c) for c in record.row()]
        line = "  ".join(c.ljust(w) for c, w in zip(cells, widths))
        out.write(line.rstrip() + "\n")
