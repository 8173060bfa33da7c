"""Shared data, reference arithmetic and random generators for the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from tropsched.linalg import TropicalMatrix, TropicalVector
from tropsched.scheduling import ProjectInstance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
EX1_FILE = FIXTURES / "paper_ex1.json"
EX2_FILE = FIXTURES / "paper_ex2.json"
SINGLE_FILE = FIXTURES / "single_activity.json"

N = None  # tropical zero in plain lists

EX1_A = [[1, 2, 2], [1, 1, 2], [N, 0, 1]]
EX1_G = [0, 0, 0]
EX1_H = [1, 2, 2]

EX2_A = [[1, 1, 2], [2, 1, N], [N, 1, 1]]
EX2_G = [0, 0, 0]
EX2_F = [3, 3, 2]


def ex1() -> ProjectInstance:
    return ProjectInstance.build(EX1_A, EX1_G, release_deadline=EX1_H, name="ex1")


def ex2() -> ProjectInstance:
    return ProjectInstance.build(EX2_A, EX2_G, deadline=EX2_F, name="ex2")


def fr(x):
    return None if x is None else Fraction(x)


def as_lists(m: TropicalMatrix):
    return [[v.value for v in row] for row in m.to_lists()]


# -- reference max-plus arithmetic on nested lists (None is the zero) --------

def r_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def r_mul(a, b):
    return None if a is None or b is None else a + b


def r_matmul(a, b):
    out = []
    for i in range(len(a)):
        row = []
        for j in range(len(b[0])):
            acc = None
            for k in range(len(b)):
                acc = r_add(acc, r_mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


def max_cycle_mean(a):
    """Largest mean weight over all elementary cycles, by brute force."""
    n = len(a)
    best = None
    for length in range(1, n + 1):
        for cyc in itertools.permutations(range(n), length):
            if cyc[0] != min(cyc):
                continue
            w = Fraction(0)
            for s, t in zip(cyc, cyc[1:] + cyc[:1]):
                if a[s][t] is None:
                    w = None
                    break
                w += a[s][t]
            if w is not None:
                best = r_add(best, w / length)
    return best


# -- hypothesis strategies ---------------------------------------------------

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)
entries = st.one_of(st.none(), small_rationals)


@st.composite
def square_lists(draw, min_n=1, max_n=4, elements=entries):
    n = draw(st.integers(min_n, max_n))
    return [[draw(elements) for _ in range(n)] for _ in range(n)]


@st.composite
def matrix_and_vector(draw, min_n=1, max_n=4):
    a = draw(square_lists(min_n, max_n))
    n = len(a)
    x = [draw(small_rationals) for _ in range(n)]
    return a, x


# -- random project instances ------------------------------------------------

def random_lags(rng: random.Random, n: int, lo: int = -3, hi: int = 5, p_zero: float = 0.3,
                column_regular: bool = False, durations: tuple[int, int] | None = None):
    """Random lag matrix with nonempty rows; ``durations`` bounds the diagonal."""
    while True:
        a = [[None if rng.random() < p_zero else rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        if durations is not None:
            for i in range(n):
                a[i][i] = rng.randint(*durations)
        rows_ok = all(any(v is not None for v in row) for row in a)
        cols_ok = all(any(a[i][j] is not None for i in range(n)) for j in range(n))
        if rows_ok and (cols_ok or not column_regular):
            return a


def random_instance(rng: random.Random, n: int, kind: str | None = None,
                    lo: int = -3, hi: int = 5, profile: str = "uniform") -> ProjectInstance:
    """Feasible instance with integer data in ``[lo, hi]``.

    ``kind`` is ``"release_deadline"``, ``"deadline"`` or ``None`` (random).
    Deadlines are drawn between ``A g`` and ``hi``.  The ``"short"`` profile
    uses durations in ``[-1, 1]``, early releases and windows at least 2
    wide; such instances often have a segment frontier.
    """
    kind = kind or rng.choice(["release_deadline", "deadline"])
    short = profile == "short"
    durations = (-1, 1) if short else None
    g_hi = 0 if short else hi
    slack = 2 if short else 0
    if kind == "release_deadline":
        a = random_lags(rng, n, lo, hi, durations=durations)
        g = [rng.randint(lo, g_hi) for _ in range(n)]
        h = [rng.randint(gi + slack, hi) for gi in g]
        return ProjectInstance.build(a, g, release_deadline=h)
    while True:
        a = random_lags(rng, n, lo, hi, column_regular=True, durations=durations)
        g = [rng.randint(lo, g_hi) for _ in range(n)]
        ag = [max(aij + gj for aij, gj in zip(row, g) if aij is not None) for row in a]
        if max(ag) + slack > hi:
            continue
        f = [rng.randint(v + slack, hi) for v in ag]
        return ProjectInstance.build(a, g, deadline=f)


def random_square(rng: random.Random, n: int, lo: int = -3, hi: int = 5, p_zero: float = 0.3):
    return [[None if rng.random() < p_zero else Fraction(rng.randint(lo * 2, hi * 2), 2) for _ in range(n)]
            for _ in range(n)]


def random_vector(rng: random.Random, n: int, lo: int = -3, hi: int = 5, p_zero: float = 0.0):
    while True:
        v = [None if rng.random() < p_zero else Fraction(rng.randint(lo * 3, hi * 3), 3) for _ in range(n)]
        if any(x is not None for x in v):
            return v


def tv(values) -> TropicalVector:
    return TropicalVector(values)


def tm(rows) -> TropicalMatrix:
    return TropicalMatrix(rows)
