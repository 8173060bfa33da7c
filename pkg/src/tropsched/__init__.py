"""Exact max-plus solver for bi-objective project scheduling.

Minimizes the maximum flow-time and the makespan of a project under
release times and either release deadlines or finish deadlines, returning
the complete Pareto frontier and every Pareto-optimal schedule in closed
form.
"""

from .errors import *  # noqa: F401,F403
from .linalg import TropicalMatrix, TropicalVector
from .oracle import check_frontier, grid_pareto, verify_instance
from .pareto import (
    BiObjectiveProblem,
    ParetoFrontier,
    Segment,
    SinglePoint,
    constants,
    frontier,
    objectives,
    solution_at,
)
from .scheduling import (
    ProjectInstance,
    evaluate_schedule,
    load_instance,
    to_tropical_c1,
    to_tropical_c2,
    validate,
)
from .semiring import ONE, ZERO, TropicalValue

__version__ = "0.1.0"
