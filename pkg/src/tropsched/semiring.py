"""Idempotent semifields.

The solver works in max-plus algebra over exact rationals:
``a (+) b = max(a, b)``, ``a (x) b = a + b``, zero is ``-inf`` and one is ``0``.
:class:`TropicalValue` implements that algebra with Python operators
(``+`` is tropical addition, ``*`` tropical multiplication, ``**`` rational
power), mirroring the usual semiring-object idiom.

A floating min-times instance is also provided.  It is not used by the
solver; it exists so the semifield laws can be exercised on a second
structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Any, Callable, Union

from .errors import InverseOfZero, ZeroToNonpositivePower

__all__ = [
    "TropicalValue",
    "ZERO",
    "ONE",
    "oplus",
    "otimes",
    "inverse",
    "rpow",
    "as_value",
    "parse_rational",
    "parse_value",
    "format_rational",
    "SemifieldInstance",
    "MAX_PLUS",
    "MIN_TIMES",
]

Scalar = Union["TropicalValue", int, Fraction, str, None]


@total_ordering
class TropicalValue:
    """Max-plus scalar: either the zero element (``-inf``) or an exact rational."""

    __slots__ = ("_value",)

    def __init__(self, value: int | Fraction | None = None):
        if value is not None:
            if isinstance(value, float):
                raise TypeError("use parse_value() for floats; TropicalValue is exact")
            value = Fraction(value)
        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("TropicalValue is immutable")

    @property
    def value(self) -> Fraction | None:
        """The rational value, or ``None`` for the zero element."""
        return self._value

    @property
    def is_zero(self) -> bool:
        return self._value is None

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    def __add__(self, other: Any) -> TropicalValue:
        try:
            other = as_value(other)
        except TypeError:
            return NotImplemented
        return oplus(self, other)

    __radd__ = __add__

    def __mul__(self, other: Any) -> TropicalValue:
        try:
            other = as_value(other)
        except TypeError:
            return NotImplemented
        return otimes(self, other)

    __rmul__ = __mul__

    def __pow__(self, r: int | Fraction) -> TropicalValue:
        return rpow(self, r)

    def __truediv__(self, other: Any) -> TropicalValue:
        return otimes(self, inverse(as_value(other)))

    def inverse(self) -> TropicalValue:
        return inverse(self)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TropicalValue):
            try:
                other = as_value(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._value == other._value

    def __lt__(self, other: Any) -> bool:
        other = as_value(other)
        if self._value is None:
            return other._value is not None
        if other._value is None:
            return False
        return self._value < other._value

    def __hash__(self) -> int:
        # same as hash(Fraction) so that TropicalValue(3) == 3 hashes alike
        return hash(self._value)

    def __float__(self) -> float:
        return -math.inf if self._value is None else float(self._value)

    def __str__(self) -> str:
        return "-inf" if self._value is None else format_rational(self._value)

    def __repr__(self) -> str:
        return f"TropicalValue({self})"

    def __reduce__(self):
        return (TropicalValue, (self._value,))


ZERO = TropicalValue(None)
ONE = TropicalValue(0)


def as_value(x: Scalar) -> TropicalValue:
    """Coerce ints, Fractions, rational strings and ``None`` to a TropicalValue."""
    if isinstance(x, TropicalValue):
        return x
    return parse_value(x)


def oplus(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if a._value is None:
        return b
    if b._value is None:
        return a
    return a if a._value >= b._value else b


def otimes(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if a._value is None or b._value is None:
        return ZERO
    return TropicalValue(a._value + b._value)


def inverse(a: TropicalValue) -> TropicalValue:
    if a._value is None:
        raise InverseOfZero("the tropical zero has no multiplicative inverse")
    return TropicalValue(-a._value)


def rpow(a: TropicalValue, r: int | Fraction) -> TropicalValue:
    """Rational power: ``a ** r`` is the ordinary product ``r * a``."""
    r = Fraction(r)
    if a._value is None:
        if r <= 0:
            raise ZeroToNonpositivePower(f"zero raised to non-positive power {r}")
        return ZERO
    return TropicalValue(r * a._value)


def parse_rational(x: Any) -> Fraction:
    """Parse ``3``, ``1.5``, ``"3/2"``, ``"-0.25"`` into an exact Fraction.

    Floats are read through their shortest repr, so ``0.1`` means 1/10.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite rational: {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_value(x: Any) -> TropicalValue:
    """Like :func:`parse_rational`, but ``None``, ``"-inf"`` and ``-inf`` mean zero."""
    if isinstance(x, TropicalValue):
        return x
    if x is None:
        return ZERO
    if isinstance(x, float) and x == -math.inf:
        return ZERO
    if isinstance(x, str) and x.strip().lower() in ("-inf", "-infinity"):
        return ZERO
    return TropicalValue(parse_rational(x))


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SemifieldInstance:
    """Operation table of an idempotent semifield.

    ``le`` is the order induced by addition: ``a <= b`` iff ``a (+) b == b``.
    """

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    le: Callable[[Any, Any], bool]


def _mt_inv(x: float) -> float:
    if x == math.inf:
        raise InverseOfZero("the min-times zero (+inf) has no inverse")
    return 1.0 / x


MAX_PLUS = SemifieldInstance(
    name="max-plus",
    zero=ZERO,
    one=ONE,
    add=oplus,
    mul=otimes,
    inv=inverse,
    le=lambda a, b: a <= b,
)

# Positive reals with min as addition; the induced order reverses the usual one.
MIN_TIMES = SemifieldInstance(
    name="min-times",
    zero=math.inf,
    one=1.0,
    add=min,
    mul=lambda a, b: a * b,
    inv=_mt_inv,
    le=lambda a, b: a >= b,
)
