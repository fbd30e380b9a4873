import pytest

from packed import (
    Builder,
    Layout,
    Meter,
    OutOfBounds,
    RawCursor,
    TypeStateViolation,
    dynamic_pack,
    from_bytes,
    run_reader,
    to_bytes,
)

from conftest import leaf, node


@pytest.fixture
def two_ints(tree_schema):
    b = Builder(tree_schema, ["Int", "Int"], Layout.PLAIN)
    return b.write_prim(3).write_prim(4).finish()


class TestCasts:
    def test_roundtrip(self):
        data = bytes(range(9))
        assert to_bytes(from_bytes(data, ["Tree"])) is data

    def test_no_validation(self):
        packed = from_bytes(b"", ["Tree"])
        surfaces = (("Int",), ("Tree", "Tree"))
        with pytest.raises(OutOfBounds):
            packed.cursor()._case_step("Tree", surfaces)
        packed_int = from_bytes(b"", ["Int"])
        with pytest.raises(OutOfBounds):
            packed_int.cursor().read_prim()


class TestCursor:
    def test_read_prim_sequence(self, two_ints):
        c = two_ints.cursor()
        assert c.remaining == ("Int", "Int")
        v, c = c.read_prim()
        assert v == 3
        assert c.remaining == ("Int",)
        assert c.offset == 8
        v, c = c.read_prim()
        assert v == 4
        assert c.exhausted

    def test_fork(self, two_ints):
        c = two_ints.cursor()
        _, after = c.read_prim()
        # the original cursor is untouched by reads on the fork
        assert c.offset == 0
        v1, _ = after.read_prim()
        v2, _ = after.read_prim()
        assert v1 == v2 == 4

    def test_mismatch_consumes_nothing(self, two_ints):
        c = two_ints.cursor()
        with pytest.raises(TypeStateViolation):
            c.read_field_size()
        assert c.offset == 0

    def test_exhausted_read(self, two_ints):
        c = two_ints.cursor()
        _, c = c.read_prim()
        _, c = c.read_prim()
        with pytest.raises(TypeStateViolation):
            c.read_prim()

    def test_truncated_prim(self, tree_schema):
        packed = from_bytes(bytes(5), ["Int"])
        with pytest.raises(OutOfBounds):
            packed.cursor().read_prim()


class TestRunReader:
    def test_sum_of_two_ints(self, two_ints):
        def reader(c):
            a, c = c.read_prim()
            b, c = c.read_prim()
            return a + b, c

        total, final = run_reader(two_ints, reader)
        assert total == 7
        assert final.exhausted

    def test_staged_reads_via_suffix(self, two_ints):
        first, suffix = run_reader(two_ints, lambda c: c.read_prim())
        assert first == 3
        second, rest = suffix.read_prim()
        assert second == 4
        assert rest.exhausted

    def test_wrong_obligation_rejected(self, two_ints):
        def bad(c):
            return c.read_field_size()

        with pytest.raises(TypeStateViolation):
            run_reader(two_ints, bad)

    def test_identity_reader(self, two_ints):
        value, c = run_reader(two_ints, lambda c: (None, c))
        assert value is None
        assert c.remaining == ("Int", "Int")


class TestFieldSizes:
    def test_skip_then_read(self, tree_schema):
        data = dynamic_pack(tree_schema, leaf(42), Layout.INDIRECT)
        packed = from_bytes(data, ["Tree"])
        surfaces = (("FieldSize", "Int"), ())
        ordinal, c = packed.cursor()._case_step("Tree", surfaces)
        assert ordinal == 0
        c = c.skip_field_size()
        v, c = c.read_prim()
        assert v == 42

    def test_read_field_size_value(self, tree_schema):
        data = dynamic_pack(tree_schema, node(leaf(1), leaf(2)), Layout.INDIRECT)
        packed = from_bytes(data, ["Tree"])
        surfaces = (
            ("FieldSize", "Int"),
            ("FieldSize", "Tree", "FieldSize", "Tree"),
        )
        ordinal, c = packed.cursor()._case_step("Tree", surfaces)
        assert ordinal == 1
        size, c = c.read_field_size()
        assert size == 13

    def test_jump_lands_on_right_child(self, tree_schema):
        data = dynamic_pack(tree_schema, node(leaf(1), leaf(2)), Layout.INDIRECT)
        packed = from_bytes(data, ["Tree"])
        surfaces = (
            ("FieldSize", "Int"),
            ("FieldSize", "Tree", "FieldSize", "Tree"),
        )
        _, c = packed.cursor()._case_step("Tree", surfaces)
        size, c = c.read_field_size()
        c = c.jump_over_field(size)
        _, c = c.skip_field_size()._case_step("Tree", surfaces)
        c = c.skip_field_size()
        v, c = c.read_prim()
        assert v == 2
        assert c.exhausted
        assert c.offset == len(data)

    def test_jump_out_of_bounds(self, tree_schema):
        data = dynamic_pack(tree_schema, node(leaf(1), leaf(2)), Layout.INDIRECT)
        packed = from_bytes(data, ["Tree"])
        surfaces = (
            ("FieldSize", "Int"),
            ("FieldSize", "Tree", "FieldSize", "Tree"),
        )
        _, c = packed.cursor()._case_step("Tree", surfaces)
        _, c = c.read_field_size()
        with pytest.raises(OutOfBounds):
            c.jump_over_field(len(data) + 1)

    def test_jump_requires_field_head(self, two_ints):
        c = two_ints.cursor()
        c.jump_over_field(8)  # Int head is a field: allowed
        with pytest.raises(TypeStateViolation):
            # a FieldSize head is not a jumpable field
            surfaces = (("FieldSize",),)
            packed = from_bytes(bytes(5), ["T"])
            _, c2 = packed.cursor()._case_step("T", surfaces)
            c2.jump_over_field(4)

    def test_skip_on_plain_cursor_rejected(self, two_ints):
        with pytest.raises(TypeStateViolation):
            two_ints.cursor().skip_field_size()

    def test_skip_field_sizes_noop_when_absent(self, two_ints):
        c = two_ints.cursor().skip_field_sizes()
        assert c.offset == 0


class TestMeter:
    def test_counts_consumed_not_jumped(self, tree_schema):
        data = dynamic_pack(tree_schema, node(leaf(1), leaf(2)), Layout.INDIRECT)
        packed = from_bytes(data, ["Tree"])
        surfaces = (
            ("FieldSize", "Int"),
            ("FieldSize", "Tree", "FieldSize", "Tree"),
        )
        meter = Meter()
        _, c = packed.cursor(meter)._case_step("Tree", surfaces)
        size, c = c.read_field_size()
        c = c.jump_over_field(size)
        _, c = c.skip_field_size()._case_step("Tree", surfaces)
        v, _ = c.skip_field_size().read_prim()
        # tag + size + (jump: 0) + size + tag + size + int
        assert meter.bytes_consumed == 1 + 4 + 4 + 1 + 4 + 8


class TestRawCursor:
    def test_walk_plain_leaf(self, tree_schema):
        data = dynamic_pack(tree_schema, leaf(-7), Layout.PLAIN)
        c = RawCursor(data)
        assert c.read_tag() == 0
        assert c.read_int() == -7
        assert c.pos == len(data)

    def test_walk_indirect_leaf(self, tree_schema):
        data = dynamic_pack(tree_schema, leaf(9), Layout.INDIRECT)
        c = RawCursor(data)
        assert c.read_tag() == 0
        assert c.read_size() == 8
        assert c.read_int() == 9

    def test_skip_past_end(self):
        c = RawCursor(bytes(4))
        with pytest.raises(OutOfBounds):
            c.skip(5)

    def test_read_past_end(self):
        c = RawCursor(b"")
        with pytest.raises(OutOfBounds):
            c.read_tag()
