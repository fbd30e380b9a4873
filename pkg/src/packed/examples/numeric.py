"""Two's-complement 64-bit arithmetic used by the example traversals."""

from __future__ import annotations

_U64 = 1 << 64
_I64_SIGN = 1 << 63


def wrap64(x: int) -> int:
    """Wrap to the signed 64-bit range."""
    x &= _U64 - 1
    return x - _U64 if x >= _I64_SIGN else x


def trunc_div64(a: int, b: int) -> int:
    """Truncated-toward-zero division, wrapped to 64 bits."""
    if b == 0:
        raise ZeroDivisionError("division by zero in packed arithmetic")
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap64(q)
