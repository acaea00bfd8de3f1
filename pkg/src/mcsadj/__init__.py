"""Monotone comparative statics for choices subject to adjustment costs.

Choice sets are finite sublattices of R^n, objectives are tables over
lattice members and a parameter poset, and costs are extended-real
functions of the adjustment vector. Every theorem check verifies its
hypotheses first and raises :class:`HypothesisError` when one fails.
"""

from .costs import CostFunction, ScalarCost
from .dynamic_solver import DynamicScenario, brute_force, solve_dynamic, theorem3_check, theorem4_check
from .errors import (
    ConfigError,
    ConvergenceError,
    CycleError,
    EngineError,
    HypothesisError,
    InfeasibleError,
    LatticeError,
    McsError,
)
from .kernels import BACKEND
from .lattice import GridLattice, ParamPoset
from .lechatelier import prop3_forall_check, theorem2_check
from .myopic import equilibrium_sequence, prop2_select, theorem5_check, theorem6_check
from .objective import Objective
from .reports import TheoremReport
from .static_solver import StaticProblem, prop1_forall_check, theorem1_check, theorem1_star_check
from .stochastic import CostLottery, theorem_prime_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConvergenceError",
    "CostFunction",
    "CostLottery",
    "CycleError",
    "DynamicScenario",
    "EngineError",
    "GridLattice",
    "HypothesisError",
    "InfeasibleError",
    "LatticeError",
    "McsError",
    "Objective",
    "ParamPoset",
    "ScalarCost",
    "StaticProblem",
    "TheoremReport",
    "brute_force",
    "equilibrium_sequence",
    "prop1_forall_check",
    "prop2_select",
    "prop3_forall_check",
    "solve_dynamic",
    "theorem1_check",
    "theorem1_star_check",
    "theorem2_check",
    "theorem3_check",
    "theorem4_check",
    "theorem5_check",
    "theorem6_check",
    "theorem_prime_check",
    "__version__",
]
