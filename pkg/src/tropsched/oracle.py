"""Brute-force and identity checkers for the analytic solver.

Nothing here reuses the frontier formulas.  :func:`grid_pareto` enumerates
start vectors on a rational grid and keeps the non-dominated objective pairs.
The two identity checkers expand sums over index compositions with a small
pure-Python max-plus kernel and compare them against :mod:`tropsched.linalg`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import GridTooLarge, OracleLimitExceeded, TropicalError
from .linalg import (
    TropicalMatrix,
    TropicalVector,
    big_trace,
    conjugate_transpose,
    kleene_star,
    mat_add,
    outer,
    scalar_mul,
)
from .pareto import ParetoFrontier, frontier, solution_at
from .scheduling import (
    DEADLINE,
    ValidatedInstance,
    evaluate_schedule,
    to_problem,
    validate,
)
from .semiring import as_value, format_rational

__all__ = [
    "SampledPoint",
    "SampledFront",
    "VerificationReport",
    "DEFAULT_GRID_CAP",
    "default_step",
    "grid_pareto",
    "check_frontier",
    "check_trace_identity",
    "check_star_identity",
    "verify_instance",
]

DEFAULT_GRID_CAP = 10**7
GRID_MAX_N = 4
IDENTITY_MAX_N = 5

_CHUNK = 1 << 16
_SAFE = 1 << 40
_NEG = -(1 << 60)


@dataclass(frozen=True)
class SampledPoint:
    flow_time: Fraction
    makespan: Fraction
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class SampledFront:
    """Non-dominated objective pairs found on the grid, sorted by flow-time."""

    points: tuple[SampledPoint, ...]
    step: Fraction
    grid_size: int
    feasible: int
    instance: str = ""


@dataclass(frozen=True)
class VerificationReport:
    instance: str
    max_violation: Fraction
    region_violation: Fraction
    endpoint_gaps: tuple[Fraction, ...]
    tolerance: Fraction
    identities: dict[str, bool] = field(default_factory=dict)
    attainment: dict[str, bool] = field(default_factory=dict)
    details: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return (
            self.max_violation == 0
            and self.region_violation == 0
            and all(gap <= self.tolerance for gap in self.endpoint_gaps)
            and all(self.identities.values())
            and all(self.attainment.values())
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "pass": self.passed,
            "max_violation": format_rational(self.max_violation),
            "region_violation": format_rational(self.region_violation),
            "endpoint_gaps": [format_rational(g) for g in self.endpoint_gaps],
            "tolerance": format_rational(self.tolerance),
            "identities": dict(self.identities),
            "attainment": dict(self.attainment),
            "details": list(self.details),
        }


# ---------------------------------------------------------------------------
# grid enumeration

def _data(v: ValidatedInstance) -> list[Fraction]:
    ins = v.instance
    vals = [a for row in ins.lags for a in row if a is not None]
    vals += list(ins.release)
    vals += list(ins.release_deadline or ins.deadline)
    return vals


def default_step(instance) -> Fraction:
    """``1 / (2 * lcm of all data denominators)``."""
    v = instance if isinstance(instance, ValidatedInstance) else validate(instance)
    return Fraction(1, 2 * math.lcm(*(q.denominator for q in _data(v))))


def _upper_box(v: ValidatedInstance) -> list[Fraction]:
    ins = v.instance
    if ins.release_deadline is not None:
        return list(ins.release_deadline)
    # x_j <= f_i - a_ij for every finite lag, evaluated directly
    n = ins.n
    return [
        min(ins.deadline[i] - ins.lags[i][j] for i in range(n) if ins.lags[i][j] is not None)
        for j in range(n)
    ]


def _nondominated(flow: np.ndarray, mk: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Positions of non-dominated pairs; ties keep the earliest grid index."""
    order = np.lexsort((idx, mk, flow))
    mk_sorted = mk[order]
    best = np.minimum.accumulate(mk_sorted)
    keep = np.ones(len(order), dtype=bool)
    keep[1:] = mk_sorted[1:] < best[:-1]
    return order[keep]


def grid_pareto(
    instance,
    step: Any = None,
    *,
    cap: int = DEFAULT_GRID_CAP,
    max_n: int = GRID_MAX_N,
) -> SampledFront:
    """Enumerate ``x in g + step * Z^n`` inside the start-time box.

    For finish deadlines the box is ``x_j <= min_i (f_i - a_ij)``, and every
    candidate is additionally filtered by ``y <= f``.  The non-dominated pairs
    are re-evaluated with :func:`evaluate_schedule` as a consistency check.
    """
    v = instance if isinstance(instance, ValidatedInstance) else validate(instance)
    ins = v.instance
    n = ins.n
    if n > max_n:
        raise OracleLimitExceeded(f"grid oracle is limited to n <= {max_n}, got n = {n}")
    step = default_step(v) if step is None else as_value(step).value
    if step is None or step <= 0:
        raise ValueError("grid step must be a positive rational")

    lo = list(ins.release)
    hi = _upper_box(v)
    counts = [int((h - g) // step) + 1 for g, h in zip(lo, hi)]
    total = math.prod(counts)
    if total > cap:
        raise GridTooLarge(f"grid has {total} points, cap is {cap}; use a coarser step")

    scale = math.lcm(step.denominator, *(q.denominator for q in _data(v)))
    unit = int(step * scale)
    g_int = np.array([int(q * scale) for q in lo], dtype=np.int64)
    a_int = np.array(
        [[_NEG if a is None else int(a * scale) for a in row] for row in ins.lags],
        dtype=np.int64,
    )
    finite = [abs(int(q * scale)) for q in _data(v)] + [abs(int(h * scale)) for h in hi]
    if max(finite, default=0) >= _SAFE:
        raise OracleLimitExceeded("instance data too large for the integer grid")
    f_int = None
    if v.kind == DEADLINE:
        f_int = np.array([int(q * scale) for q in ins.deadline], dtype=np.int64)

    cand_flow, cand_mk, cand_idx = [], [], []
    feasible = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        k = np.stack(np.unravel_index(idx, counts), axis=1).astype(np.int64)
        x = g_int + unit * k
        y = np.max(a_int[None, :, :] + x[:, None, :], axis=2)
        if f_int is not None:
            ok = np.all(y <= f_int, axis=1)
            idx, x, y = idx[ok], x[ok], y[ok]
        feasible += len(idx)
        if not len(idx):
            continue
        flow = np.max(y - x, axis=1)
        mk = np.max(y, axis=1) - np.min(x, axis=1)
        keep = _nondominated(flow, mk, idx)
        cand_flow.append(flow[keep])
        cand_mk.append(mk[keep])
        cand_idx.append(idx[keep])

    if not cand_idx:
        return SampledFront((), step, total, 0, ins.name)
    flow = np.concatenate(cand_flow)
    mk = np.concatenate(cand_mk)
    idx = np.concatenate(cand_idx)
    keep = _nondominated(flow, mk, idx)

    points = []
    for pos in keep:
        k = np.unravel_index(int(idx[pos]), counts)
        xs = tuple(g + step * int(kj) for g, kj in zip(lo, k))
        pf, pm = Fraction(int(flow[pos]), scale), Fraction(int(mk[pos]), scale)
        sched = evaluate_schedule(v, xs)
        if (sched.max_flow_time, sched.makespan) != (pf, pm):
            raise RuntimeError(f"grid arithmetic disagrees with evaluate_schedule at x = {xs}")
        points.append(SampledPoint(pf, pm, xs))
    return SampledFront(tuple(points), step, total, feasible, ins.name)


# ---------------------------------------------------------------------------
# frontier comparison

def _dominance_depth(front: ParetoFrontier, f: Fraction, m: Fraction) -> Fraction:
    """How far ``(f, m)`` strictly dominates some analytic point, else 0."""
    lo, hi = front.alpha_lo.value, front.alpha_hi.value
    if f > hi:
        return Fraction(0)
    a = max(f, lo)
    b = front.beta(a).value
    if m <= b and (f < a or m < b):
        return max(a - f, b - m)
    b_hi = front.beta(hi).value
    if f < hi and m <= b_hi:
        return max(hi - f, b_hi - m)
    return Fraction(0)


def _region_gap(front: ParetoFrontier, f: Fraction, m: Fraction) -> Fraction:
    """Distance by which ``(f, m)`` lies outside ``{a >= alpha_lo, b >= beta(a)}``."""
    return max(Fraction(0), front.alpha_lo.value - f, front.beta(f).value - m)


def check_frontier(
    front: ParetoFrontier,
    sampled: SampledFront,
    tolerance: Any = None,
) -> VerificationReport:
    """Compare an analytic frontier with a sampled one.

    Three exact checks: no sample strictly dominates an analytic point
    (``max_violation``); no sample lies below the analytic lower envelope
    (``region_violation``); every endpoint is weakly dominated by a sample up
    to ``tolerance`` in each coordinate (default: the grid step).
    """
    tol = sampled.step if tolerance is None else as_value(tolerance).value
    details = []
    worst = Fraction(0)
    region = Fraction(0)
    for pt in sampled.points:
        d = _dominance_depth(front, pt.flow_time, pt.makespan)
        if d > 0:
            details.append(
                f"sample ({pt.flow_time}, {pt.makespan}) at x = "
                f"({', '.join(map(format_rational, pt.x))}) dominates the frontier by {d}"
            )
        worst = max(worst, d)
        region = max(region, _region_gap(front, pt.flow_time, pt.makespan))

    gaps = []
    for a, b in front.endpoints():
        a, b = a.value, b.value
        best = min(
            (max(pt.flow_time - a, pt.makespan - b, Fraction(0)) for pt in sampled.points),
            default=None,
        )
        if best is None:
            details.append("no feasible grid point")
            best = Fraction(10**9)
        elif best > tol:
            details.append(f"endpoint ({a}, {b}) is {best} away from every sample")
        gaps.append(best)
    return VerificationReport(
        instance=sampled.instance,
        max_violation=worst,
        region_violation=region,
        endpoint_gaps=tuple(gaps),
        tolerance=tol,
        details=tuple(details),
    )


# ---------------------------------------------------------------------------
# independent max-plus kernel (Fractions, None for the zero element)

def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _mul(a, b):
    return None if a is None or b is None else a + b


def _sum(values):
    acc = None
    for v in values:
        acc = _add(acc, v)
    return acc


def _mm(a, b):
    return [[_sum(_mul(a[i][k], b[k][j]) for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _mv(a, x):
    return [_sum(_mul(aij, xj) for aij, xj in zip(row, x)) for row in a]


def _vm(x, a):
    return [_sum(_mul(x[i], a[i][j]) for i in range(len(a))) for j in range(len(a[0]))]


def _dot(x, y):
    return _sum(_mul(a, b) for a, b in zip(x, y))


def _eye(n):
    return [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]


def _powers(a, upto):
    out = [_eye(len(a))]
    for _ in range(upto):
        out.append(_mm(out[-1], a))
    return out


def _plain_matrix(a) -> list[list]:
    if isinstance(a, TropicalMatrix):
        return [[v.value for v in row] for row in a.to_lists()]
    return [[as_value(v).value for v in row] for row in a]


def _plain_vector(x) -> list:
    return [as_value(v).value for v in x]


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def _prepare(A, p, q, limit):
    a = _plain_matrix(A)
    n = len(a)
    if n > limit:
        raise OracleLimitExceeded(f"identity checks are limited to n <= {limit}, got n = {n}")
    pv, qv = _plain_vector(p), _plain_vector(q)
    qc = [None if v is None else -v for v in qv]
    return a, pv, qv, qc, n


def check_trace_identity(A, p, q, *, max_n: int = IDENTITY_MAX_N) -> bool:
    """``Tr(A (+) p q^-)`` by :func:`big_trace` versus its composition expansion."""
    a, pv, qv, qc, n = _prepare(A, p, q, max_n)
    left = big_trace(mat_add(TropicalMatrix(a), outer(TropicalVector(pv), conjugate_transpose(TropicalVector(qv)))))

    pw = _powers(a, n)
    s = [_dot(qc, _mv(pw[i], pv)) for i in range(n)]
    right = _sum(_sum(pw[k][i][i] for i in range(n)) for k in range(1, n + 1))
    for k in range(1, n + 1):
        for m in range(0, n - k + 1):
            for comp in _compositions(m, k):
                term = Fraction(0)
                for i in comp:
                    term = _mul(term, s[i])
                right = _add(right, term)
    return left.value == right


def check_star_identity(A, p, q, *, max_n: int = IDENTITY_MAX_N) -> bool:
    """``(A (+) p q^-)*`` by :func:`kleene_star` versus its composition expansion.

    Raises :class:`~tropsched.errors.StarDiverges` when the star does not exist.
    """
    a, pv, qv, qc, n = _prepare(A, p, q, max_n)
    left = kleene_star(mat_add(TropicalMatrix(a), outer(TropicalVector(pv), conjugate_transpose(TropicalVector(qv)))))

    pw = _powers(a, n)
    s = [_dot(qc, _mv(pw[i], pv)) for i in range(n)]
    col = [_mv(pw[i], pv) for i in range(n)]   # A^i p
    row = [_vm(qc, pw[i]) for i in range(n)]   # q^- A^i
    right = [[_sum(pw[k][i][j] for k in range(n)) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        for m in range(0, n - k):
            for comp in _compositions(m, k + 1):
                coef = Fraction(0)
                for i in comp[1:-1]:
                    coef = _mul(coef, s[i])
                if coef is None:
                    continue
                c, r = col[comp[0]], row[comp[-1]]
                for i in range(n):
                    for j in range(n):
                        right[i][j] = _add(right[i][j], _mul(coef, _mul(c[i], r[j])))
    return all(
        left[i, j].value == right[i][j] for i in range(n) for j in range(n)
    )


# ---------------------------------------------------------------------------
# end-to-end verification

def _attainment(v, prob, front: ParetoFrontier) -> tuple[dict[str, bool], list[str]]:
    """Materialize schedules at both endpoints and the midpoint of ``front``."""
    lo, hi = front.alpha_lo.value, front.alpha_hi.value
    alphas = {"alpha_lo": lo, "alpha_mid": (lo + hi) / 2, "alpha_hi": hi}
    results, notes = {}, []
    for name, a in alphas.items():
        beta = front.beta(a).value
        try:
            sol = solution_at(prob, a, front)
            scheds = [evaluate_schedule(v, sol.materialize(u)) for u in (sol.u_lo, sol.u_hi)]
        except (TropicalError, ArithmeticError) as exc:
            results[name] = False
            notes.append(f"{name} = {format_rational(a)}: {type(exc).__name__}: {exc}")
            continue
        ok = all(s.max_flow_time <= a and s.makespan <= beta for s in scheds)
        if not ok:
            got = ", ".join(f"({s.max_flow_time}, {s.makespan})" for s in scheds)
            notes.append(
                f"{name} = {format_rational(a)}: claimed beta {format_rational(beta)}, schedules give {got}"
            )
        results[name] = ok
    return results, notes


def verify_instance(
    instance,
    step: Any = None,
    *,
    front: ParetoFrontier | None = None,
    tolerance: Any = None,
    cap: int = DEFAULT_GRID_CAP,
) -> VerificationReport:
    """Grid oracle, frontier comparison, identity checks and attainment.

    ``front`` defaults to the solver's frontier; passing another one (for
    example a deliberately shifted copy) checks that one instead.
    """
    v = instance if isinstance(instance, ValidatedInstance) else validate(instance)
    prob = to_problem(v)
    truth = frontier(prob)
    tested = truth if front is None else front

    sampled = grid_pareto(v, step, cap=cap)
    report = check_frontier(tested, sampled, tolerance)

    ids = {"trace": check_trace_identity(prob.A, prob.p, prob.q)}
    a0 = truth.alpha_lo
    b0 = truth.beta(a0)
    ids["star"] = check_star_identity(
        scalar_mul(a0.inverse(), prob.A), scalar_mul(b0.inverse(), prob.p), prob.q
    )
    attained, notes = _attainment(v, prob, tested)
    return replace(
        report,
        identities=ids,
        attainment=attained,
        details=report.details + tuple(notes),
    )
