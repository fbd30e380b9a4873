"""Example ADTs (binary tree, arithmetic AST), traversals and baselines."""

from .ast import (
    AST_SCHEMA,
    Add,
    Ast,
    Div,
    Mul,
    Sub,
    Value,
    ast_api,
    ast_surface,
    eval_native,
    eval_packed,
    eval_packed_raw,
    gen_random_ast,
    pack_ast,
    unpack_ast,
    unpack_then_eval,
)
from .trees import (
    TREE_SCHEMA,
    Leaf,
    Node,
    Tree,
    case_increment_then_pack,
    gen_random_tree,
    gen_symmetric_tree,
    increment_native,
    increment_packed,
    pack_tree,
    rightmost_native,
    rightmost_packed_indirect,
    rightmost_packed_plain,
    rightmost_packed_raw,
    sum_native,
    sum_packed,
    sum_packed_raw,
    tree_api,
    tree_surface,
    unpack_increment_repack,
    unpack_then_rightmost,
    unpack_then_sum,
    unpack_tree,
)
from .numeric import trunc_div64, wrap64

__all__ = [
    "AST_SCHEMA",
    "Add",
    "Ast",
    "Div",
    "Leaf",
    "Mul",
    "Node",
    "Sub",
    "TREE_SCHEMA",
    "Tree",
    "Value",
    "ast_api",
    "ast_surface",
    "case_increment_then_pack",
    "eval_native",
    "eval_packed",
    "eval_packed_raw",
    "gen_random_ast",
    "gen_random_tree",
    "gen_symmetric_tree",
    "increment_native",
    "increment_packed",
    "pack_ast",
    "pack_tree",
    "rightmost_native",
    "rightmost_packed_indirect",
    "rightmost_packed_plain",
    "rightmost_packed_raw",
    "sum_native",
    "sum_packed",
    "sum_packed_raw",
    "trunc_div64",
    "tree_api",
    "tree_surface",
    "unpack_ast",
    "unpack_increment_repack",
    "unpack_then_eval",
    "unpack_then_rightmost",
    "unpack_then_sum",
    "unpack_tree",
    "wrap64",
]
