"""Anderson-accelerated perturbed Newton solvers.

Thin python surface over the C++ core: benchmark problems, single solves
with full iteration traces, the adaptive gamma-safeguarding decision, and
the multi-trial benchmark suites.
"""

from ._core import (
    IterationTrace,
    NonlinearProblem,
    RunRecord,
    SafeguardDecision,
    SolveConfig,
    SolverError,
    TrialSummary,
    beh_problem,
    chandrasekhar,
    gamma_safeguard,
    make_config,
    observed_order,
    preset_suite_names,
    random_x0,
    run_suite,
    singular_toy,
    solve,
)

__all__ = [
    "IterationTrace",
    "NonlinearProblem",
    "RunRecord",
    "SafeguardDecision",
    "SolveConfig",
    "SolverError",
    "TrialSummary",
    "beh_problem",
    "chandrasekhar",
    "gamma_safeguard",
    "make_config",
    "observed_order",
    "preset_suite_names",
    "random_x0",
    "run_suite",
    "singular_toy",
    "solve",
]

__version__ = "0.1.0"
