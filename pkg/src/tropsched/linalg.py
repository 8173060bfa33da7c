"""Dense max-plus matrices and vectors with exact rational entries.

Storage
-------
A matrix or vector keeps a single positive integer denominator ``den`` and a
numpy array of integer numerators, with ``-inf`` standing for the tropical
zero.  Entry ``(i, j)`` is ``num[i, j] / den``.  Since max-plus products only
add entries, every product of matrices sharing ``den`` shares it too, so the
arithmetic stays in integers throughout.

The numerator array is ``float64`` while all magnitudes are below 2**52 (exact
integer arithmetic in doubles, and ``-inf`` for free).  Anything larger falls
back to an ``object`` array of Python ints, which is slow but still exact.

Vectors are one-dimensional and carry no orientation: ``x @ A`` treats ``x`` as
a row, ``A @ x`` as a column and ``x @ y`` is the scalar ``x^T y``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import (
    AllZeroMatrix,
    IrregularBound,
    NotColumnRegular,
    NotSquare,
    ParameterBelowBound,
    ShapeMismatch,
    StarDiverges,
)
from .semiring import ONE, ZERO, TropicalValue, as_value, oplus, rpow

__all__ = [
    "TropicalMatrix",
    "TropicalVector",
    "mat_add",
    "mat_mul",
    "scalar_mul",
    "conjugate_transpose",
    "outer",
    "trace",
    "big_trace",
    "matrix_powers",
    "kleene_star",
    "spectral_radius",
    "norm",
    "solve_upper",
    "solve_lower",
]

NEG = -math.inf
_EXACT = 2**52


# ---------------------------------------------------------------------------
# numerator-array helpers (float64 or object, -inf = tropical zero)

def _finite(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.frompyfunc(lambda v: v != NEG, 1, 1)(arr).astype(bool)
    return np.isfinite(arr)


def _bound(arr: np.ndarray) -> int:
    """Largest absolute finite numerator (0 when there is none)."""
    if arr.size == 0:
        return 0
    fin = arr[_finite(arr)]
    if fin.size == 0:
        return 0
    return int(max(abs(fin.max()), abs(fin.min())))


def _as_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    out = np.empty(arr.shape, dtype=object)
    flat_in, flat_out = arr.ravel(), out.reshape(-1)
    for i, v in enumerate(flat_in):
        flat_out[i] = int(v) if v != NEG else NEG
    return out


def _pack(arr: np.ndarray) -> np.ndarray:
    """Choose the cheapest exact dtype for a numerator array and freeze it."""
    if arr.dtype == object and _bound(arr) < _EXACT:
        arr = arr.astype(np.float64)
    elif arr.dtype != object:
        arr = np.asarray(arr, dtype=np.float64)
        if _bound(arr) >= _EXACT:
            raise OverflowError("float numerators lost exactness")
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _scale(arr: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return arr
    if arr.dtype != object and _bound(arr) * factor < _EXACT:
        return arr * factor
    return _as_object(arr) * factor


def _shift(arr: np.ndarray, c: int) -> np.ndarray:
    """Add the integer ``c`` to every finite entry."""
    if arr.dtype != object and _bound(arr) + abs(c) < _EXACT:
        return arr + c
    return _as_object(arr) + c


def _negate(arr: np.ndarray) -> np.ndarray:
    fin = _finite(arr)
    out = arr.copy() if arr.dtype == object else np.array(arr)
    out[fin] = -arr[fin]
    return out


def _max_plus_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``C[i, j] = max_k a[i, k] + b[k, j]`` for 2-D numerator arrays."""
    m, n = a.shape
    p = b.shape[1]
    if a.dtype != object and b.dtype != object and _bound(a) + _bound(b) < _EXACT:
        out = np.full((m, p), NEG)
        for k in range(n):
            np.maximum(out, a[:, k, None] + b[None, k, :], out=out)
        return out
    a, b = _as_object(a), _as_object(b)
    out = np.full((m, p), NEG, dtype=object)
    for k in range(n):
        out = np.maximum(out, a[:, k, None] + b[None, k, :])
    return out


def _reduce_max(arr: np.ndarray):
    if arr.size == 0:
        return NEG
    return arr.max()


def _value(v, den: int) -> TropicalValue:
    if v == NEG:
        return ZERO
    return TropicalValue(Fraction(int(v), den))


def _encode(values: Sequence[TropicalValue]) -> tuple[list, int]:
    den = 1
    for v in values:
        if v.is_finite:
            den = math.lcm(den, v.value.denominator)
    nums = [
        NEG if v.is_zero else v.value.numerator * (den // v.value.denominator)
        for v in values
    ]
    return nums, den


def _common(x: "_TropicalArray", y: "_TropicalArray") -> tuple[np.ndarray, np.ndarray, int]:
    den = math.lcm(x._den, y._den)
    return _scale(x._num, den // x._den), _scale(y._num, den // y._den), den


# ---------------------------------------------------------------------------
# array types

class _TropicalArray:
    __slots__ = ("_num", "_den", "__dict__")
    ndim = 0

    @classmethod
    def _raw(cls, num: np.ndarray, den: int):
        obj = cls.__new__(cls)
        obj._num = _pack(num)
        obj._den = int(den)
        return obj

    @property
    def shape(self) -> tuple[int, ...]:
        return self._num.shape

    def _entries(self) -> Iterator[TropicalValue]:
        for v in self._num.ravel():
            yield _value(v, self._den)

    @cached_property
    def is_zero(self) -> bool:
        return not _finite(self._num).any()

    def __eq__(self, other: Any) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b, _ = _common(self, other)
        return bool(np.all(a == b))

    __hash__ = None

    def __le__(self, other: "_TropicalArray") -> bool:
        """Componentwise partial order."""
        if type(other) is not type(self):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot compare shapes {self.shape} and {other.shape}")
        a, b, _ = _common(self, other)
        return bool(np.all(a <= b))

    def __ge__(self, other: "_TropicalArray") -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return other.__le__(self)

    def __add__(self, other):
        return mat_add(self, other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __rmul__(self, c):
        return scalar_mul(as_value(c), self)

    def conj(self):
        return conjugate_transpose(self)


class TropicalVector(_TropicalArray):
    """Vector over max-plus; entries given as numbers, rational strings or None."""

    __slots__ = ()
    ndim = 1

    def __init__(self, values: Iterable[Any]):
        vals = [as_value(v) for v in values]
        if not vals:
            raise ShapeMismatch("vectors must have positive dimension")
        nums, den = _encode(vals)
        self._num = _pack(np.array(nums, dtype=object))
        self._den = den

    @classmethod
    def zeros(cls, n: int) -> "TropicalVector":
        return cls._raw(np.full(n, NEG), 1)

    @classmethod
    def ones(cls, n: int) -> "TropicalVector":
        """The vector of tropical units (all arithmetic zeros)."""
        return cls._raw(np.zeros(n), 1)

    @property
    def dim(self) -> int:
        return self._num.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self) -> Iterator[TropicalValue]:
        return self._entries()

    def __getitem__(self, i: int) -> TropicalValue:
        return _value(self._num[i], self._den)

    @cached_property
    def is_regular(self) -> bool:
        return bool(_finite(self._num).all())

    def to_list(self) -> list[TropicalValue]:
        return list(self)

    def fractions(self) -> list[Fraction]:
        """Entries as Fractions; only defined for regular vectors."""
        if not self.is_regular:
            raise IrregularBound("vector has zero entries")
        return [v.value for v in self]

    def __repr__(self) -> str:
        return "TropicalVector([" + ", ".join(str(v) for v in self) + "])"


class TropicalMatrix(_TropicalArray):
    """Dense max-plus matrix built from a list of rows."""

    __slots__ = ()
    ndim = 2

    def __init__(self, rows: Iterable[Iterable[Any]]):
        table = [[as_value(v) for v in row] for row in rows]
        if not table or not table[0]:
            raise ShapeMismatch("matrices must have positive dimensions")
        width = len(table[0])
        if any(len(r) != width for r in table):
            raise ShapeMismatch("ragged rows")
        nums, den = _encode([v for r in table for v in r])
        self._num = _pack(np.array(nums, dtype=object).reshape(len(table), width))
        self._den = den

    @classmethod
    def identity(cls, n: int) -> "TropicalMatrix":
        num = np.full((n, n), NEG)
        np.fill_diagonal(num, 0.0)
        return cls._raw(num, 1)

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "TropicalMatrix":
        return cls._raw(np.full((m, m if n is None else n), NEG), 1)

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> TropicalValue:
        i, j = ij
        return _value(self._num[i, j], self._den)

    def row(self, i: int) -> TropicalVector:
        return TropicalVector._raw(self._num[i, :], self._den)

    def column(self, j: int) -> TropicalVector:
        return TropicalVector._raw(self._num[:, j], self._den)

    @cached_property
    def is_column_regular(self) -> bool:
        return bool(_finite(self._num).any(axis=0).all())

    def diagonal(self) -> list[TropicalValue]:
        return [self[i, i] for i in range(min(self.shape))]

    def transpose(self) -> "TropicalMatrix":
        return TropicalMatrix._raw(self._num.T, self._den)

    @property
    def T(self) -> "TropicalMatrix":
        return self.transpose()

    def to_lists(self) -> list[list[TropicalValue]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(v) for v in row) for row in self.to_lists())
        return f"TropicalMatrix([{body}])"


Array = Union[TropicalMatrix, TropicalVector]


def _wrap(num: np.ndarray, den: int):
    if num.ndim == 1:
        return TropicalVector._raw(num, den)
    return TropicalMatrix._raw(num, den)


# ---------------------------------------------------------------------------
# operations

def mat_add(a: Array, b: Array) -> Array:
    """Entrywise tropical sum of two arrays of equal shape."""
    if type(a) is not type(b) or a.shape != b.shape:
        raise ShapeMismatch(f"cannot add shapes {a.shape} and {b.shape}")
    x, y, den = _common(a, b)
    return _wrap(np.maximum(x, y), den)


def mat_mul(a: Array, b: Array) -> Array | TropicalValue:
    """Tropical product with ``numpy.matmul`` semantics for 1-D operands."""
    if a.shape[-1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    x, y, den = _common(a, b)
    x2 = x.reshape(1, -1) if a.ndim == 1 else x
    y2 = y.reshape(-1, 1) if b.ndim == 1 else y
    out = _max_plus_product(x2, y2)
    if a.ndim == 1 and b.ndim == 1:
        return _value(out[0, 0], den)
    if a.ndim == 1:
        return TropicalVector._raw(out[0, :], den)
    if b.ndim == 1:
        return TropicalVector._raw(out[:, 0], den)
    return TropicalMatrix._raw(out, den)


def scalar_mul(c: TropicalValue, a: Array) -> Array:
    c = as_value(c)
    if c.is_zero:
        return _wrap(np.full(a.shape, NEG), 1)
    q = c.value
    den = math.lcm(a._den, q.denominator)
    num = _shift(_scale(a._num, den // a._den), q.numerator * (den // q.denominator))
    return _wrap(num, den)


def conjugate_transpose(a: Array) -> Array:
    """Transpose with every non-zero entry replaced by its inverse."""
    if a.is_zero:
        raise AllZeroMatrix("conjugate transpose of the zero matrix is undefined")
    num = _negate(a._num)
    return _wrap(num.T if a.ndim == 2 else num, a._den)


def outer(p: TropicalVector, row: TropicalVector) -> TropicalMatrix:
    """Column ``p`` times row ``row``; ``outer(p, q.conj())`` is ``p q^-``."""
    x, y, den = _common(p, row)
    return TropicalMatrix._raw(_max_plus_product(x.reshape(-1, 1), y.reshape(1, -1)), den)


def _require_square(a: TropicalMatrix) -> None:
    if a.ndim != 2 or not a.is_square:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")


def trace(a: TropicalMatrix) -> TropicalValue:
    _require_square(a)
    return _value(_reduce_max(np.diagonal(a._num)), a._den)


def norm(a: Array) -> TropicalValue:
    """Tropical sum of all entries."""
    return _value(_reduce_max(a._num), a._den)


def matrix_powers(a: TropicalMatrix, upto: int | None = None) -> list[TropicalMatrix]:
    """``[A, A^2, ..., A^upto]`` by repeated multiplication (default ``upto = n``)."""
    _require_square(a)
    upto = a.rows if upto is None else upto
    if upto < 1:
        return []
    out = [a]
    for _ in range(upto - 1):
        out.append(TropicalMatrix._raw(_max_plus_product(out[-1]._num, a._num), a._den))
    return out


def big_trace(a: TropicalMatrix, powers: Sequence[TropicalMatrix] | None = None) -> TropicalValue:
    """``tr A (+) tr A^2 (+) ... (+) tr A^n``."""
    _require_square(a)
    powers = matrix_powers(a) if powers is None else powers
    acc = ZERO
    for pk in powers[: a.rows]:
        acc = oplus(acc, trace(pk))
    return acc


def spectral_radius(a: TropicalMatrix, powers: Sequence[TropicalMatrix] | None = None) -> TropicalValue:
    """Maximum cycle mean: tropical sum of ``tr(A^k)^(1/k)`` for k = 1..n."""
    _require_square(a)
    powers = matrix_powers(a) if powers is None else powers
    acc = ZERO
    for k, pk in enumerate(powers[: a.rows], start=1):
        acc = oplus(acc, rpow(trace(pk), Fraction(1, k)))
    return acc


def kleene_star(a: TropicalMatrix, powers: Sequence[TropicalMatrix] | None = None) -> TropicalMatrix:
    """``I (+) A (+) ... (+) A^(n-1)``; requires ``Tr(A) <= 1``."""
    _require_square(a)
    n = a.rows
    powers = matrix_powers(a) if powers is None else powers
    tr = big_trace(a, powers)
    if tr > ONE:
        raise StarDiverges(f"Tr(A) = {tr} exceeds the unit, the Kleene star does not exist")
    star = TropicalMatrix.identity(n)
    for pk in powers[: n - 1]:
        star = mat_add(star, pk)
    return star


def solve_upper(a: TropicalMatrix, d: TropicalVector) -> TropicalVector:
    """Greatest ``x`` with ``A x <= d``, i.e. ``(d^- A)^-``.

    Every ``x <= solve_upper(A, d)`` satisfies the inequality and nothing else does.
    """
    if not a.is_column_regular:
        raise NotColumnRegular("matrix has a zero column")
    if not d.is_regular:
        raise IrregularBound("right-hand side has zero entries")
    if a.rows != d.dim:
        raise ShapeMismatch(f"matrix has {a.rows} rows, bound has {d.dim} entries")
    return conjugate_transpose(mat_mul(conjugate_transpose(d), a))


def solve_lower(a: TropicalMatrix, b: TropicalVector, u: TropicalVector) -> TropicalVector:
    """The solution ``A* u`` of ``A x (+) b <= x`` selected by a parameter ``u >= b``."""
    star = kleene_star(a)
    if u.dim != b.dim or u.dim != a.rows:
        raise ShapeMismatch("vector sizes do not match the matrix order")
    if not b <= u:
        raise ParameterBelowBound("parameter vector must dominate the lower bound b")
    return mat_mul(star, u)
