import pytest
from hypothesis import strategies as st

from packed import Layout, ValueTree, parse_schema

TREE_TEXT = "data Tree = Leaf Int | Node Tree Tree"


@pytest.fixture(scope="session")
def tree_schema():
    return parse_schema(TREE_TEXT)


def leaf(v):
    return ValueTree("Tree", 0, (v,))


def node(l, r):
    return ValueTree("Tree", 1, (l, r))


int64s = st.integers(-(1 << 63), (1 << 63) - 1)

# Random Tree ValueTrees, depth-bounded by hypothesis' recursion control.
tree_values = st.recursive(
    st.builds(leaf, st.integers(-1000, 1000)),
    lambda children: st.builds(node, children, children),
    max_leaves=64,
)

layouts = st.sampled_from(list(Layout))
