"""Checked 64-bit signed arithmetic. Out-of-range results raise, never wrap."""

from __future__ import annotations

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class ArithmeticFault(Exception):
    """Overflow or division by zero; ``kind`` is ``"overflow"`` or ``"div_by_zero"``."""

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(kind)


def fits(value: int) -> bool:
    return INT_MIN <= value <= INT_MAX


def check(value: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise ArithmeticFault("overflow")
    return value


def add(a: int, b: int) -> int:
    return check(a + b)


def sub(a: int, b: int) -> int:
    return check(a - b)


def mul(a: int, b: int) -> int:
    return check(a * b)


def neg(a: int) -> int:
    return check(-a)


def div(a: int, b: int) -> int:
    # truncates toward zero, like Java's long division
    if b == 0:
        raise ArithmeticFault("div_by_zero")
    q = abs(a) // abs(b)
    return check(q if (a >= 0) == (b >= 0) else -q)


def power(base: int, exponent: int) -> int:
    """``base ** exponent`` by repeated squaring with overflow checks.

    The base is only squared while exponent bits remain, so an overflowing
    square always implies an overflowing final result.
    """
    if exponent < 0:
        raise ArithmeticFault("negative_exponent")
    result = 1
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result
