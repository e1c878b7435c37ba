"""Energy-aware cell switching for HAPS-assisted cellular networks."""

__version__ = "0.1.0"

from .harness import (
    DEFAULT_DEMO_SEED,
    SweepSpec,
    compare_solvers,
    run_demo,
    run_sweep,
)
from .objectives import Evaluator, Formulation, RatePolicy, SwitchVector
from .params import BSKind, FadingMode, RadioParams, UserClass
from .propagation import LinkLoss, build_link_table
from .radio import associate
from .scenario import Scenario, ScenarioConfig, generate_scenario, step_mobility
from .solvers import GaConfig, SolverResult, exhaustive, genetic, greedy, solve

__all__ = [
    "__version__",
    "BSKind",
    "DEFAULT_DEMO_SEED",
    "Evaluator",
    "FadingMode",
    "Formulation",
    "GaConfig",
    "LinkLoss",
    "RadioParams",
    "RatePolicy",
    "Scenario",
    "ScenarioConfig",
    "SolverResult",
    "SwitchVector",
    "SweepSpec",
    "UserClass",
    "associate",
    "build_link_table",
    "compare_solvers",
    "exhaustive",
    "generate_scenario",
    "genetic",
    "greedy",
    "run_demo",
    "run_sweep",
    "solve",
    "step_mobility",
]
