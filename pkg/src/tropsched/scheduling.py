"""Project instances, their reduction to the bi-objective max-plus problem, and
schedule evaluation in ordinary arithmetic.

An activity ``i`` starts at ``x_i`` and finishes at
``y_i = max_j (a_ij + x_j)``.  Release times bound starts from below; either
release deadlines bound starts from above, or deadlines bound finishes from
above (one kind per instance).  The two objectives are the maximum flow-time
``max_i (y_i - x_i)`` and the makespan ``max_i y_i - min_i x_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import (
    BothOrNeitherDeadlineKind,
    DanglingActivity,
    FinishAfterDeadline,
    InfeasibleDeadline,
    InfeasibleReleaseWindow,
    InvalidInstance,
    IrregularDeadline,
    NotColumnRegular,
    StartTimeOutOfWindow,
    WrongDeadlineKind,
)
from .linalg import TropicalMatrix, TropicalVector, mat_mul, solve_upper
from .pareto import BiObjectiveProblem
from .semiring import parse_rational, parse_value

__all__ = [
    "ProjectInstance",
    "ValidatedInstance",
    "Schedule",
    "validate",
    "to_tropical_c1",
    "to_tropical_c2",
    "to_problem",
    "evaluate_schedule",
    "load_instance",
    "instance_from_dict",
    "instance_to_dict",
]

RELEASE_DEADLINE = "release_deadline"
DEADLINE = "deadline"


@dataclass(frozen=True)
class ProjectInstance:
    """Raw project data.

    ``lags[i][j]`` is the minimum lag from the start of ``j`` to the finish of
    ``i`` (``None`` when undefined).  Exactly one of ``release_deadline`` and
    ``deadline`` should be given.
    """

    lags: tuple[tuple[Fraction | None, ...], ...]
    release: tuple[Fraction, ...]
    release_deadline: tuple[Fraction, ...] | None = None
    deadline: tuple[Fraction, ...] | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.lags)

    @classmethod
    def build(cls, lags, release, release_deadline=None, deadline=None, name="") -> "ProjectInstance":
        """Normalize numbers, rational strings and ``None`` into exact fields."""

        def lag(v):
            tv = parse_value(v)
            return None if tv.is_zero else tv.value

        def vec(vs):
            return None if vs is None else tuple(parse_rational(v) for v in vs)

        return cls(
            lags=tuple(tuple(lag(v) for v in row) for row in lags),
            release=vec(release),
            release_deadline=vec(release_deadline),
            deadline=vec(deadline),
            name=name,
        )

    @property
    def matrix(self) -> TropicalMatrix:
        return TropicalMatrix(self.lags)


@dataclass(frozen=True, eq=False)
class ValidatedInstance:
    instance: ProjectInstance
    kind: str
    A: TropicalMatrix
    g: TropicalVector
    # upper bound on start times: h itself, or (f^- A)^- for deadlines
    h_eff: TropicalVector
    warnings: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def f(self) -> TropicalVector | None:
        d = self.instance.deadline
        return None if d is None else TropicalVector(d)


@dataclass(frozen=True)
class Schedule:
    start: tuple[Fraction, ...]
    finish: tuple[Fraction, ...]
    max_flow_time: Fraction
    makespan: Fraction


def validate(instance: ProjectInstance) -> ValidatedInstance:
    """Check every structural constraint; errors name the rule and the indices."""
    n = instance.n
    if n == 0:
        raise InvalidInstance("instance has no activities")
    if any(len(row) != n for row in instance.lags):
        raise InvalidInstance("lag matrix must be n x n")
    if len(instance.release) != n:
        raise InvalidInstance(f"release has {len(instance.release)} entries, expected {n}")

    has_h = instance.release_deadline is not None
    has_f = instance.deadline is not None
    if has_h == has_f:
        raise BothOrNeitherDeadlineKind(
            "exactly one of release_deadline / deadline must be given"
        )
    bound = instance.release_deadline if has_h else instance.deadline
    if len(bound) != n:
        raise InvalidInstance(f"bound vector has {len(bound)} entries, expected {n}")

    dangling = tuple(i for i, row in enumerate(instance.lags) if all(v is None for v in row))
    if dangling:
        raise DanglingActivity(
            f"activities {list(dangling)} have no finite lag, their finish is undefined",
            dangling,
        )

    warnings = tuple(
        f"activity {i} has negative duration a_ii = {instance.lags[i][i]}"
        for i in range(n)
        if instance.lags[i][i] is not None and instance.lags[i][i] < 0
    )

    A = instance.matrix
    g = TropicalVector(instance.release)

    if has_h:
        bad = tuple(i for i in range(n) if instance.release[i] > instance.release_deadline[i])
        if bad:
            raise InfeasibleReleaseWindow(
                f"release time exceeds release deadline at activities {list(bad)}", bad
            )
        return ValidatedInstance(
            instance, RELEASE_DEADLINE, A, g, TropicalVector(instance.release_deadline), warnings
        )

    earliest = mat_mul(A, g)
    bad = tuple(i for i in range(n) if earliest[i].value > instance.deadline[i])
    if bad:
        raise InfeasibleDeadline(
            f"earliest finish (A g) exceeds the deadline at activities {list(bad)}", bad
        )
    if not A.is_column_regular:
        cols = tuple(j for j in range(n) if all(instance.lags[i][j] is None for i in range(n)))
        raise NotColumnRegular(f"lag matrix has zero columns {list(cols)}; deadlines need column-regular lags")
    h_eff = solve_upper(A, TropicalVector(instance.deadline))
    return ValidatedInstance(instance, DEADLINE, A, g, h_eff, warnings)


def _ensure(inst) -> ValidatedInstance:
    return inst if isinstance(inst, ValidatedInstance) else validate(inst)


def to_tropical_c1(inst) -> BiObjectiveProblem:
    """Release-deadline instance as ``(A, p = 1, q^- = 1^T A, g, h)``."""
    v = _ensure(inst)
    if v.kind != RELEASE_DEADLINE:
        raise WrongDeadlineKind("instance has finish deadlines, not release deadlines")
    one = TropicalVector.ones(v.n)
    return BiObjectiveProblem.with_row(v.A, one, mat_mul(one, v.A), v.g, v.h_eff)


def to_tropical_c2(inst) -> BiObjectiveProblem:
    """Deadline instance: the finish bound ``A x <= f`` becomes ``x <= (f^- A)^-``."""
    v = _ensure(inst)
    if v.kind != DEADLINE:
        raise WrongDeadlineKind("instance has release deadlines, not finish deadlines")
    if any(d is None for d in v.instance.deadline):
        raise IrregularDeadline("deadline vector must be regular")
    one = TropicalVector.ones(v.n)
    return BiObjectiveProblem.with_row(v.A, one, mat_mul(one, v.A), v.g, v.h_eff)


def to_problem(inst) -> BiObjectiveProblem:
    v = _ensure(inst)
    return to_tropical_c1(v) if v.kind == RELEASE_DEADLINE else to_tropical_c2(v)


def evaluate_schedule(inst, x: Sequence[Any]) -> Schedule:
    """Finish times and both objectives, computed with plain max/min/+."""
    v = _ensure(inst)
    ins = v.instance
    xs = tuple(
        (xi.value if hasattr(xi, "is_zero") else parse_rational(xi)) for xi in x
    )
    if len(xs) != ins.n or any(xi is None for xi in xs):
        raise StartTimeOutOfWindow("start vector must have n finite entries")
    low = tuple(i for i in range(ins.n) if xs[i] < ins.release[i])
    high = ()
    if ins.release_deadline is not None:
        high = tuple(i for i in range(ins.n) if xs[i] > ins.release_deadline[i])
    if low or high:
        raise StartTimeOutOfWindow(
            f"start times outside [release, release_deadline] at activities {sorted(low + high)}",
            tuple(sorted(low + high)),
        )
    ys = tuple(
        max(a + xj for a, xj in zip(row, xs) if a is not None) for row in ins.lags
    )
    if ins.deadline is not None:
        late = tuple(i for i in range(ins.n) if ys[i] > ins.deadline[i])
        if late:
            raise FinishAfterDeadline(f"finish after deadline at activities {list(late)}", late)
    return Schedule(
        start=xs,
        finish=ys,
        max_flow_time=max(yi - xi for yi, xi in zip(ys, xs)),
        makespan=max(ys) - min(xs),
    )


# ---------------------------------------------------------------------------
# JSON project files

def instance_from_dict(doc: Mapping[str, Any], name: str = "") -> ProjectInstance:
    try:
        n = int(doc["n"])
        lags = doc["lags"]
        release = doc["release"]
    except KeyError as exc:
        raise InvalidInstance(f"project file is missing key {exc.args[0]!r}") from None
    try:
        inst = ProjectInstance.build(
            lags,
            release,
            release_deadline=doc.get("release_deadline"),
            deadline=doc.get("deadline"),
            name=name or str(doc.get("name", "")),
        )
    except (TypeError, ValueError) as exc:
        raise InvalidInstance(f"malformed project data: {exc}") from None
    if inst.n != n:
        raise InvalidInstance(f"'n' is {n} but the lag matrix has {inst.n} rows")
    return inst


def load_instance(path: str | Path) -> ProjectInstance:
    path = Path(path)
    with path.open() as fh:
        try:
            doc = json.load(fh, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"{path}: not valid JSON ({exc})") from None
    return instance_from_dict(doc, name=path.stem)


def instance_to_dict(inst: ProjectInstance) -> dict[str, Any]:
    def r(q):
        return None if q is None else (q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}")

    doc: dict[str, Any] = {
        "n": inst.n,
        "lags": [[r(v) for v in row] for row in inst.lags],
        "release": [r(v) for v in inst.release],
    }
    if inst.release_deadline is not None:
        doc["release_deadline"] = [r(v) for v in inst.release_deadline]
    if inst.deadline is not None:
        doc["deadline"] = [r(v) for v in inst.deadline]
    return doc
