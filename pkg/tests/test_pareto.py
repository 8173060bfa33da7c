import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import EX1_A, EX1_G, EX1_H, N, tm, tv
from tropsched.errors import (
    AlphaOutOfRange,
    InvalidProblem,
    IrregularVector,
    ParameterOutOfBox,
    ShapeMismatch,
    UnboundedFrontier,
    ZeroArgument,
)
from tropsched.linalg import TropicalVector, mat_mul
from tropsched.pareto import (
    BiObjectiveProblem,
    Segment,
    SinglePoint,
    constants,
    eval_G,
    eval_H,
    frontier,
    materialize,
    objectives,
    solution_at,
)
from tropsched.semiring import ZERO, TropicalValue

F = Fraction


def c1_problem(a, g, h):
    A = tm(a)
    ones = TropicalVector.ones(A.rows)
    return BiObjectiveProblem.with_row(A, ones, mat_mul(ones, A), tv(g), tv(h))


EX1 = c1_problem(EX1_A, EX1_G, EX1_H)


def test_problem_validation():
    with pytest.raises(InvalidProblem):
        c1_problem(EX1_A, [0, 3, 0], EX1_H)  # g above h
    with pytest.raises(ShapeMismatch):
        c1_problem(EX1_A, [0, 0], [1, 1])
    assert EX1.n == 3
    assert EX1.q_conj == tv([1, 2, 2])


def test_constants_example_1():
    c = constants(EX1)
    assert (c.lam, c.mu, c.nu) == (F(3, 2), F(3, 2), 2)
    assert c.coefficients == (4, 5)


def test_G_and_H_example_1():
    c = constants(EX1)
    assert eval_G(F(3, 2), c) == F(5, 2)
    assert eval_G(2, c) == 2
    assert eval_H(2, c) == 2
    with pytest.raises(ZeroArgument):
        eval_G(ZERO, c)
    with pytest.raises(ZeroArgument):
        eval_H(None, c)


def test_frontier_example_1():
    front = frontier(EX1)
    assert isinstance(front, Segment)
    assert (front.alpha_lo, front.alpha_hi, front.nu) == (F(3, 2), 2, 2)
    for a in (F(3, 2), F(7, 4), 2):
        assert front.beta(a) == 4 - a
    assert front.describe() == "segment: alpha in [3/2, 2], beta = max(4 - alpha, 5 - 2*alpha)"
    assert front.endpoints() == [(F(3, 2), F(5, 2)), (2, 2)]


def test_single_activity():
    prob = c1_problem([[2]], [0], [0])
    c = constants(prob)
    assert (c.lam, c.mu, c.nu) == (2, ZERO, 2)
    assert eval_G(5, c) == ZERO and eval_H(5, c) == ZERO
    front = frontier(prob)
    assert isinstance(front, SinglePoint)
    assert (front.alpha, front.nu) == (2, 2)
    assert front.describe() == "point: (2, 2)"
    assert front.sample(10) == [(2, 2)]


def test_unbounded_frontier():
    # nilpotent A, and g, p, q chosen so that every constant is the zero
    A = tm([[N, 0], [N, N]])
    prob = BiObjectiveProblem(A, tv([0, N]), tv([N, 0]), tv([0, N]), tv([0, 0]))
    c = constants(prob)
    assert c.lam.is_zero and c.mu.is_zero and c.nu.is_zero
    with pytest.raises(UnboundedFrontier):
        frontier(prob)


def test_solution_at_lower_end_example_1():
    sol = solution_at(EX1, F(3, 2))
    assert sol.star == tm([[0, F(1, 2), 1], [F(-1, 2), 0, F(1, 2)], [-1, F(-1, 2), 0]])
    assert sol.u_lo == tv([0, 0, 0])
    assert sol.u_hi == tv([1, F(1, 2), 0])
    assert materialize(sol, [0, 0, 0]) == tv([1, F(1, 2), 0])
    assert materialize(sol, sol.u_hi) == tv([1, F(1, 2), 0])
    assert objectives(EX1, tv([1, F(1, 2), 0])) == (F(3, 2), F(5, 2))


def test_solution_at_upper_end_example_1():
    sol = solution_at(EX1, 2)
    assert sol.u_hi == tv([1, 1, 1])
    rng = random.Random(3)
    for _ in range(20):
        u = [F(rng.randint(0, 12), 12) for _ in range(3)]
        x = sol.materialize(u)
        assert x[1] == x[2]
        assert objectives(EX1, x) == (2, 2)


def test_solution_inside_example_1():
    sol = solution_at(EX1, F(5, 3))
    x = sol.materialize([1, F(1, 3), 0])
    assert x == tv([1, F(1, 3), 0])
    assert objectives(EX1, x) == (F(5, 3), F(7, 3))
    assert objectives(EX1, sol.materialize(sol.u_lo)) == (F(5, 3), F(7, 3))
    with pytest.raises(ParameterOutOfBox):
        sol.materialize([2, 0, 0])
    with pytest.raises(AlphaOutOfRange):
        solution_at(EX1, F(7, 5))
    with pytest.raises(AlphaOutOfRange):
        solution_at(EX1, 3)


def test_objectives_example_1():
    assert objectives(EX1, [0, 0, 0]) == (2, 2)
    with pytest.raises(IrregularVector):
        objectives(EX1, [0, N, 0])


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_objectives_invariant_under_shift(c):
    x = [F(1), F(1, 2), F(0)]
    shifted = [xi + c for xi in x]
    assert objectives(EX1, shifted) == objectives(EX1, x)


# -- G/H conjugacy ---------------------------------------------------------------

@st.composite
def coefficient_sets(draw):
    n = draw(st.integers(2, 6))
    return [draw(st.one_of(st.none(), st.fractions(-8, 8, max_denominator=5))) for _ in range(n - 1)]


def _consts(coeffs):
    from tropsched.pareto import FrontierConstants
    return FrontierConstants(ZERO, ZERO, ZERO, tuple(TropicalValue(c) for c in coeffs), ())


@settings(max_examples=200)
@given(coefficient_sets(),
       st.fractions(-10, 10, max_denominator=9),
       st.fractions(-10, 10, max_denominator=9))
def test_G_H_conjugacy(coeffs, s, t):
    assume(any(c is not None for c in coeffs))
    c = _consts(coeffs)
    assert (eval_G(s, c) <= TropicalValue(t)) == (eval_H(t, c) <= TropicalValue(s))
    # both are non-increasing
    assert eval_G(s + 1, c) <= eval_G(s, c)
    assert eval_H(t + 1, c) <= eval_H(t, c)


@settings(max_examples=200)
@given(coefficient_sets(), st.fractions(-10, 10, max_denominator=9))
def test_H_is_least_s_with_G_below_t(coeffs, t):
    assume(any(c is not None for c in coeffs))
    c = _consts(coeffs)
    h = eval_H(t, c).value
    assert eval_G(h, c) <= t
    assert eval_G(h - F(1, 1000), c) > t


# -- frontier on random problems ---------------------------------------------------

def _random_c1(rng, n):
    while True:
        a = [[None if rng.random() < 0.3 else rng.randint(-3, 5) for _ in range(n)] for _ in range(n)]
        if all(any(v is not None for v in row) for row in a):
            break
    g = [rng.randint(-3, 5) for _ in range(n)]
    h = [rng.randint(gi, 5) for gi in g]
    return c1_problem(a, g, h)


@pytest.mark.parametrize("seed", range(40))
def test_frontier_points_are_attained(seed):
    rng = random.Random(seed)
    prob = _random_c1(rng, rng.randint(1, 5))
    front = frontier(prob)
    for a, b in front.sample(7):
        sol = solution_at(prob, a, front)
        for u in (sol.u_lo, sol.u_hi):
            x = sol.materialize(u)
            assert prob.g <= x <= prob.h
            fa, fb = objectives(prob, x)
            assert fa <= a and fb == b
            # a different reading of the objectives: plain arithmetic
            xs = x.fractions()
            ys = [max(v.value + xj for v, xj in zip(row, xs) if v.is_finite) for row in prob.A.to_lists()]
            assert max(y - xi for y, xi in zip(ys, xs)) == fa.value
            assert max(ys) - min(xs) == fb.value


@pytest.mark.parametrize("seed", range(40))
def test_random_feasible_points_lie_above_frontier(seed):
    rng = random.Random(1000 + seed)
    prob = _random_c1(rng, rng.randint(1, 4))
    front = frontier(prob)
    g, h = prob.g.fractions(), prob.h.fractions()
    for _ in range(50):
        x = [gi + (hi - gi) * F(rng.randint(0, 8), 8) for gi, hi in zip(g, h)]
        fa, fb = objectives(prob, x)
        assert fa >= front.alpha_lo
        assert fb >= front.beta(fa)
