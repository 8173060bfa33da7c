"""Bi-objective max-plus problem and its closed-form Pareto frontier.

Problem: over regular ``x`` with ``g <= x <= h``, minimize both
``x^- A x`` and ``x^- p q^- x``.

All quantities on the frontier come from one power table ``A, A^2, ..., A^n``:

* ``lam = (+)_k tr(A^k)^(1/k)``                          (k = 1..n)
* ``mu  = (+)_k (h^- A^k g)^(1/k)``                       (k = 1..n-1)
* ``nu  = q^- p (+) (h^- p)(q^- g)``
* ``G(s) = (+)_k c_k s^-k`` and ``H(t) = (+)_k (c_k t^-1)^(1/k)``, where
  ``c_k = q^- A^k p (+) (+)_{i+j=k} (h^- A^i p)(q^- A^j g)`` and the convolution
  term only exists for ``k <= n-2``.

``G(s) <= t`` holds exactly when ``H(t) <= s``.  The frontier is the point
``(lam (+) mu, nu)`` if ``lam (+) mu >= H(nu)``; otherwise it is the curve
``beta = G(alpha)`` for ``alpha`` in ``[lam (+) mu, H(nu)]``.  Total cost is
O(n^4), dominated by the power table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    AlphaOutOfRange,
    EmptyParameterBox,
    IrregularVector,
    InvalidProblem,
    ParameterOutOfBox,
    ShapeMismatch,
    UnboundedFrontier,
    ZeroArgument,
)
from .linalg import (
    TropicalMatrix,
    TropicalVector,
    conjugate_transpose,
    kleene_star,
    mat_add,
    mat_mul,
    matrix_powers,
    outer,
    scalar_mul,
    spectral_radius,
)
from .semiring import ONE, ZERO, TropicalValue, as_value, format_rational, oplus, otimes, rpow

__all__ = [
    "BiObjectiveProblem",
    "FrontierConstants",
    "ParetoFrontier",
    "SinglePoint",
    "Segment",
    "ParametricSolution",
    "constants",
    "eval_G",
    "eval_H",
    "frontier",
    "solution_at",
    "materialize",
    "objectives",
]


@dataclass(frozen=True, eq=False)
class BiObjectiveProblem:
    """Data ``(A, p, q, g, h)``; validated on construction."""

    A: TropicalMatrix
    p: TropicalVector
    q: TropicalVector
    g: TropicalVector
    h: TropicalVector

    def __post_init__(self):
        A = self.A
        if not A.is_square:
            raise ShapeMismatch("A must be square")
        if A.is_zero:
            raise InvalidProblem("A must be a nonzero matrix")
        for name in ("p", "q", "g", "h"):
            v = getattr(self, name)
            if v.dim != A.rows:
                raise ShapeMismatch(f"{name} has {v.dim} entries, A has order {A.rows}")
            if v.is_zero:
                raise InvalidProblem(f"{name} must be a nonzero vector")
        if mat_mul(self.h_conj, self.g) > ONE:
            raise InvalidProblem("lower bound g exceeds upper bound h (h^- g > 1)")

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def q_conj(self) -> TropicalVector:
        """The row vector ``q^-``."""
        return conjugate_transpose(self.q)

    @property
    def h_conj(self) -> TropicalVector:
        return conjugate_transpose(self.h)

    @classmethod
    def with_row(cls, A, p, q_conj, g, h) -> "BiObjectiveProblem":
        """Build from ``q^-`` directly, the way scheduling problems state it."""
        return cls(A, p, conjugate_transpose(q_conj), g, h)


@dataclass(frozen=True, eq=False)
class FrontierConstants:
    lam: TropicalValue
    mu: TropicalValue
    nu: TropicalValue
    # c_k for k = 1..n-1 (zero entries kept so indices stay aligned)
    coefficients: tuple[TropicalValue, ...]
    powers: tuple[TropicalMatrix, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.powers)

    def terms(self) -> list[tuple[int, TropicalValue]]:
        """Non-zero ``(k, c_k)`` pairs of ``G``."""
        return [(k, c) for k, c in enumerate(self.coefficients, start=1) if c.is_finite]


def constants(prob: BiObjectiveProblem) -> FrontierConstants:
    A, n = prob.A, prob.n
    powers = matrix_powers(A)
    hc, qc = prob.h_conj, prob.q_conj

    lam = spectral_radius(A, powers)

    mu = ZERO
    for k in range(1, n):
        mu = oplus(mu, rpow(mat_mul(hc, mat_mul(powers[k - 1], prob.g)), Fraction(1, k)))

    nu = oplus(mat_mul(qc, prob.p), otimes(mat_mul(hc, prob.p), mat_mul(qc, prob.g)))

    # (h^- A^i p) and (q^- A^j g) for i, j = 0..n-2, by vector iteration
    left, right = [], []
    hrow, gcol = hc, prob.g
    for i in range(max(n - 1, 0)):
        left.append(mat_mul(hrow, prob.p))
        right.append(mat_mul(qc, gcol))
        hrow, gcol = mat_mul(hrow, A), mat_mul(A, gcol)

    coeffs = []
    for k in range(1, n):
        c = mat_mul(qc, mat_mul(powers[k - 1], prob.p))
        if k <= n - 2:
            for i in range(k + 1):
                c = oplus(c, otimes(left[i], right[k - i]))
        coeffs.append(c)

    return FrontierConstants(lam, mu, nu, tuple(coeffs), tuple(powers))


def _positive(s, name: str) -> TropicalValue:
    s = as_value(s)
    if s.is_zero:
        raise ZeroArgument(f"{name} must be greater than the tropical zero")
    return s


def eval_G(s, c: FrontierConstants) -> TropicalValue:
    s = _positive(s, "s")
    acc = ZERO
    for k, ck in c.terms():
        acc = oplus(acc, otimes(ck, rpow(s, -k)))
    return acc


def eval_H(t, c: FrontierConstants) -> TropicalValue:
    t = _positive(t, "t")
    acc = ZERO
    for k, ck in c.terms():
        acc = oplus(acc, rpow(otimes(ck, t.inverse()), Fraction(1, k)))
    return acc


# ---------------------------------------------------------------------------
# frontier

@dataclass(frozen=True)
class ParetoFrontier:
    """Common part of both frontier shapes.

    ``beta(alpha) = nu (+) G(alpha)`` is the lower envelope of attainable
    objective pairs; on a segment it coincides with ``G(alpha)``.
    """

    alpha_lo: TropicalValue
    alpha_hi: TropicalValue
    nu: TropicalValue
    coefficients: tuple[TropicalValue, ...]

    kind = "frontier"

    def G(self, alpha) -> TropicalValue:
        alpha = _positive(alpha, "alpha")
        acc = ZERO
        for k, ck in enumerate(self.coefficients, start=1):
            if ck.is_finite:
                acc = oplus(acc, otimes(ck, rpow(alpha, -k)))
        return acc

    def beta(self, alpha) -> TropicalValue:
        return oplus(self.nu, self.G(alpha))

    def contains(self, alpha) -> bool:
        alpha = as_value(alpha)
        return self.alpha_lo <= alpha <= self.alpha_hi

    def endpoints(self) -> list[tuple[TropicalValue, TropicalValue]]:
        pts = [(self.alpha_lo, self.beta(self.alpha_lo))]
        if self.alpha_hi != self.alpha_lo:
            pts.append((self.alpha_hi, self.beta(self.alpha_hi)))
        return pts

    def sample(self, points: int = 100) -> list[tuple[TropicalValue, TropicalValue]]:
        """``points`` evenly spaced alphas, both endpoints included."""
        if self.alpha_hi == self.alpha_lo:
            return [(self.alpha_lo, self.beta(self.alpha_lo))]
        if points < 2:
            raise ValueError("a segment needs at least two sample points")
        lo, hi = self.alpha_lo.value, self.alpha_hi.value
        out = []
        for i in range(points):
            a = TropicalValue(lo + (hi - lo) * Fraction(i, points - 1))
            out.append((a, self.beta(a)))
        return out

    def shifted(self, delta) -> "ParetoFrontier":
        """Copy whose beta curve is moved by ``delta``; used for fault injection."""
        d = as_value(delta)
        return type(self)(
            self.alpha_lo,
            self.alpha_hi,
            otimes(self.nu, d),
            tuple(otimes(c, d) for c in self.coefficients),
        )

    def g_formula(self, var: str = "alpha") -> str:
        """``G`` in ordinary notation, e.g. ``max(4 - alpha, 5 - 2*alpha)``."""
        parts = []
        for k, ck in enumerate(self.coefficients, start=1):
            if ck.is_zero:
                continue
            mono = var if k == 1 else f"{k}*{var}"
            parts.append(f"{format_rational(ck.value)} - {mono}")
        if not parts:
            return "-inf"
        return parts[0] if len(parts) == 1 else "max(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class SinglePoint(ParetoFrontier):
    kind = "point"

    @property
    def alpha(self) -> TropicalValue:
        return self.alpha_lo

    def describe(self) -> str:
        return f"point: ({self.alpha_lo}, {self.nu})"


@dataclass(frozen=True)
class Segment(ParetoFrontier):
    kind = "segment"

    def describe(self) -> str:
        return (
            f"segment: alpha in [{self.alpha_lo}, {self.alpha_hi}], "
            f"beta = {self.g_formula()}"
        )


def frontier(prob: BiObjectiveProblem, consts: FrontierConstants | None = None) -> ParetoFrontier:
    c = constants(prob) if consts is None else consts
    lo = oplus(c.lam, c.mu)
    if lo.is_zero or c.nu.is_zero:
        raise UnboundedFrontier(
            "lambda (+) mu or nu is the tropical zero; the objectives are not bounded below"
        )
    h_nu = eval_H(c.nu, c)
    if lo >= h_nu:
        return SinglePoint(lo, lo, c.nu, c.coefficients)
    return Segment(lo, h_nu, c.nu, c.coefficients)


# ---------------------------------------------------------------------------
# solutions

@dataclass(frozen=True, eq=False)
class ParametricSolution:
    """All Pareto-optimal ``x`` for one frontier point: ``x = star u``, ``u_lo <= u <= u_hi``."""

    alpha: TropicalValue
    beta: TropicalValue
    star: TropicalMatrix
    u_lo: TropicalVector
    u_hi: TropicalVector

    @property
    def is_unique(self) -> bool:
        # x = star u is monotone in u, so equal images of the box corners
        # mean every parameter gives the same schedule
        return mat_mul(self.star, self.u_lo) == mat_mul(self.star, self.u_hi)

    def materialize(self, u) -> TropicalVector:
        return materialize(self, u)


def solution_at(
    prob: BiObjectiveProblem,
    alpha,
    front: ParetoFrontier | None = None,
) -> ParametricSolution:
    front = frontier(prob) if front is None else front
    alpha = as_value(alpha)
    if not front.contains(alpha):
        if front.alpha_lo == front.alpha_hi:
            raise AlphaOutOfRange(f"frontier is the single point alpha = {front.alpha_lo}, got {alpha}")
        raise AlphaOutOfRange(
            f"alpha = {alpha} outside [{front.alpha_lo}, {front.alpha_hi}]"
        )
    beta = front.beta(alpha)
    m = mat_add(
        scalar_mul(alpha.inverse(), prob.A),
        outer(scalar_mul(beta.inverse(), prob.p), prob.q_conj),
    )
    star = kleene_star(m)
    u_lo = prob.g
    u_hi = conjugate_transpose(mat_mul(prob.h_conj, star))
    # always nonempty on a correctly computed frontier
    if not u_lo <= u_hi:
        raise EmptyParameterBox(f"no parameter vector attains ({alpha}, {beta})")
    return ParametricSolution(alpha, beta, star, u_lo, u_hi)


def materialize(sol: ParametricSolution, u) -> TropicalVector:
    u = u if isinstance(u, TropicalVector) else TropicalVector(u)
    if u.dim != sol.u_lo.dim:
        raise ShapeMismatch(f"parameter has {u.dim} entries, expected {sol.u_lo.dim}")
    if not (sol.u_lo <= u and u <= sol.u_hi):
        raise ParameterOutOfBox("parameter vector outside [u_lo, u_hi]")
    return mat_mul(sol.star, u)


def objectives(prob: BiObjectiveProblem, x) -> tuple[TropicalValue, TropicalValue]:
    """``(x^- A x, x^- p q^- x)`` for a regular ``x``."""
    x = x if isinstance(x, TropicalVector) else TropicalVector(x)
    if not x.is_regular:
        raise IrregularVector("objectives are defined for regular vectors only")
    xc = conjugate_transpose(x)
    first = mat_mul(xc, mat_mul(prob.A, x))
    second = otimes(mat_mul(xc, prob.p), mat_mul(prob.q_conj, x))
    return first, second
