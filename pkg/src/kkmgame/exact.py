"""Exact scalars: rationals plus the two infinities of the extended line.

Finite values are :class:`fractions.Fraction`; the infinities are the float
``math.inf`` objects, which compare correctly against fractions.  Values are
only ever compared, never added across signs, so no ``inf - inf`` arises.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

ExtRational = Union[Fraction, float]

POS_INF = math.inf
NEG_INF = -math.inf

_INF_TOKENS = {"+inf": POS_INF, "inf": POS_INF, "+infinity": POS_INF,
               "infinity": POS_INF, "-inf": NEG_INF, "-infinity": NEG_INF}


def to_rational(value) -> Fraction:
    """Convert an int, Fraction, decimal string or ``"p/q"`` string exactly.

    Floats are rejected unless they are integral, because binary floats
    would silently inject rounding into strict-vs-weak comparisons.
    """
    if isinstance(value, bool):
        raise ValueError(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise ValueError(f"inexact float {value!r}; write it as a string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise ValueError(f"not a rational literal: {value!r}")


def to_extended(value) -> ExtRational:
    """Like :func:`to_rational` but also accepts ``"+inf"``/``"-inf"``."""
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, str) and value.strip().lower() in _INF_TOKENS:
        return _INF_TOKENS[value.strip().lower()]
    return to_rational(value)


def format_extended(value: ExtRational) -> str:
    if isinstance(value, float):
        if value == POS_INF:
            return "+inf"
        if value == NEG_INF:
            return "-inf"
        value = to_rational(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_json_number(value: ExtRational):
    """JSON-friendly encoding: plain ints stay ints, everything else a string."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, int):
        return value
    return format_extended(value)


def integerize(values) -> tuple[list[int], int]:
    """Scale a sequence of rationals to integers by their common denominator.

    Returns ``(ints, scale)`` with ``ints[j] == values[j] * scale``.
    """
    scale = 1
    for v in values:
        scale = math.lcm(scale, Fraction(v).denominator)
    return [int(Fraction(v) * scale) for v in values], scale
