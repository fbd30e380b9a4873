import pytest
from hypothesis import given

from packed import (
    Builder,
    InvalidTag,
    Layout,
    SchemaError,
    TypeStateViolation,
    ValueTree,
    dynamic_pack,
    generate_api,
    parse_schema,
)
from packed.examples import Leaf, Node, tree_api, tree_surface

from conftest import layouts, leaf, node, tree_values


class TestSurfaces:
    def test_plain_node_surface(self, tree_schema):
        api = generate_api(tree_schema, Layout.PLAIN)
        assert api["Tree"].constructor_surface(1) == ("Tree", "Tree")

    def test_indirect_node_surface(self, tree_schema):
        api = generate_api(tree_schema, Layout.INDIRECT)
        assert api["Tree"].constructor_surface(1) == (
            "FieldSize", "Tree", "FieldSize", "Tree",
        )

    def test_skip_last_node_surface(self, tree_schema):
        api = generate_api(tree_schema, Layout.INDIRECT_SKIP_LAST)
        assert api["Tree"].constructor_surface(1) == (
            "FieldSize", "Tree", "Tree",
        )

    def test_case_continuation_sees_surface(self, tree_schema):
        api = generate_api(tree_schema, Layout.INDIRECT)
        packed = api["Tree"].pack(node(leaf(1), leaf(2)))
        seen = {}

        def on_leaf(c):
            raise AssertionError("leaf continuation must not run")

        def on_node(c):
            seen["remaining"] = c.remaining
            c = c.skip_field_sizes()
            return api["Tree"].unpack(c)  # left child, to keep cursor legal

        api["Tree"].case(packed.cursor(), on_leaf, on_node)
        assert seen["remaining"] == ("FieldSize", "Tree", "FieldSize", "Tree")

    def test_layouts_coexist(self, tree_schema):
        plain = generate_api(tree_schema, Layout.PLAIN)
        indirect = generate_api(tree_schema, Layout.INDIRECT)
        value = node(leaf(1), leaf(2))
        assert len(plain["Tree"].pack(value).data) == 19
        assert len(indirect["Tree"].pack(value).data) == 35

    def test_invalid_schema_rejected(self):
        from packed import AdtDecl, ConstructorDecl, Schema

        dangling = Schema([AdtDecl("A", (ConstructorDecl("MkA", ("B",)),))])
        with pytest.raises(SchemaError):
            generate_api(dangling, Layout.PLAIN)


class TestValueTreeMode:
    @given(value=tree_values, layout=layouts)
    def test_pack_matches_oracle(self, tree_schema, value, layout):
        api = generate_api(tree_schema, layout)
        assert api["Tree"].pack(value).data == dynamic_pack(
            tree_schema, value, layout
        )

    @given(value=tree_values, layout=layouts)
    def test_unpack_roundtrip(self, tree_schema, value, layout):
        api = generate_api(tree_schema, layout)
        assert api["Tree"].read(api["Tree"].pack(value)) == value

    def test_lift_is_identity(self, tree_schema):
        api = generate_api(tree_schema, Layout.PLAIN)
        value = node(leaf(1), leaf(2))
        assert api["Tree"].lift(value) == value
        assert api["Tree"].lower(value) == value


class TestNativeBindings:
    def test_pack_unpack_native(self):
        surface = tree_surface(Layout.INDIRECT)
        tree = Node(Leaf(1), Node(Leaf(2), Leaf(3)))
        assert surface.read(surface.pack(tree)) == tree

    def test_lift_lower(self):
        surface = tree_surface(Layout.PLAIN)
        tree = Node(Leaf(1), Leaf(2))
        lifted = surface.lift(tree)
        assert lifted == node(leaf(1), leaf(2))
        assert surface.lower(lifted) == tree

    def test_wrong_native_class(self):
        surface = tree_surface(Layout.PLAIN)
        with pytest.raises(TypeStateViolation):
            surface.pack("not a tree")

    def test_binding_arity_checked(self, tree_schema):
        with pytest.raises(SchemaError):
            generate_api(tree_schema, Layout.PLAIN, natives={"Tree": (Leaf,)})

    def test_binding_unknown_adt(self, tree_schema):
        with pytest.raises(SchemaError):
            generate_api(
                tree_schema, Layout.PLAIN, natives={"Forest": (Leaf, Node)}
            )


class TestCtorHelpers:
    def test_start_and_write_helpers(self, tree_schema):
        api = generate_api(tree_schema, Layout.PLAIN)
        surface = api["Tree"]
        b = api.new_builder(("Tree",))
        surface.start_node(b)
        surface.write_leaf(b, 1)
        surface.write_leaf(b, 2)
        expected = dynamic_pack(tree_schema, node(leaf(1), leaf(2)), Layout.PLAIN)
        assert b.finish().data == expected

    def test_write_ctor_with_adt_fields(self):
        surface = tree_surface(Layout.INDIRECT)
        b = tree_api(Layout.INDIRECT).new_builder(("Tree",))
        surface.write_node(b, Leaf(1), Leaf(2))
        assert b.finish().data == surface.pack(Node(Leaf(1), Leaf(2))).data

    def test_write_ctor_arity(self):
        surface = tree_surface(Layout.PLAIN)
        b = tree_api(Layout.PLAIN).new_builder(("Tree",))
        with pytest.raises(TypeError):
            surface.write_node(b, Leaf(1))


class TestCase:
    def test_dispatch_to_leaf(self):
        surface = tree_surface(Layout.PLAIN)
        packed = surface.pack(Leaf(7))
        value, cursor = surface.case(
            packed.cursor(),
            lambda c: c.read_prim(),
            lambda c: pytest.fail("node continuation ran"),
        )
        assert value == 7
        assert cursor.exhausted

    def test_bad_tag(self):
        surface = tree_surface(Layout.PLAIN)
        packed = surface.pack(Leaf(7))
        from packed import from_bytes

        broken = from_bytes(b"\x03" + packed.data[1:], ("Tree",))
        with pytest.raises(InvalidTag):
            surface.case(
                broken.cursor(), lambda c: c.read_prim(), lambda c: None
            )

    def test_continuation_count_checked(self):
        surface = tree_surface(Layout.PLAIN)
        packed = surface.pack(Leaf(7))
        with pytest.raises(TypeError):
            surface.case(packed.cursor(), lambda c: c.read_prim())


class TestTransform:
    def test_identity_copy(self, tree_schema):
        # copying every field verbatim reproduces the input bytes
        surface = tree_surface(Layout.INDIRECT)
        tree = Node(Leaf(5), Node(Leaf(6), Leaf(7)))
        packed = surface.pack(tree)

        def on_leaf(c, b):
            size, c = c.read_field_size()
            v, c = c.read_prim()
            return c, b.write_prim(v)

        def on_node(c, b):
            c, b = go(c.skip_field_sizes(), b)
            c, b = go(c.skip_field_sizes(), b)
            return c, b

        def go(c, b):
            return surface.transform(c, b, on_leaf, on_node)

        builder = tree_api(Layout.INDIRECT).new_builder(("Tree",))
        _, builder = go(packed.cursor(), builder)
        assert builder.finish().data == packed.data

    def test_same_tag_written(self):
        surface = tree_surface(Layout.PLAIN)
        packed = surface.pack(Leaf(1))
        builder = tree_api(Layout.PLAIN).new_builder(("Tree",))

        def on_leaf(c, b):
            v, c = c.read_prim()
            return c, b.write_prim(v + 10)

        def on_node(c, b):
            pytest.fail("node continuation ran")

        _, builder = surface.transform(packed.cursor(), builder, on_leaf, on_node)
        assert surface.read(builder.finish()) == Leaf(11)

    def test_builder_head_checked(self, tree_schema):
        surface = tree_surface(Layout.PLAIN)
        packed = surface.pack(Leaf(1))
        wrong = Builder(tree_schema, ["Int"], Layout.PLAIN)
        with pytest.raises(TypeStateViolation):
            surface.transform(
                packed.cursor(), wrong, lambda c, b: (c, b), lambda c, b: (c, b)
            )


class TestSnakeNames:
    def test_camel_case_split(self):
        schema = parse_schema("data Shape = UnitCircle | HalfPlane Int")
        api = generate_api(schema, Layout.PLAIN)
        surface = api["Shape"]
        assert callable(surface.start_unit_circle)
        assert callable(surface.write_half_plane)
