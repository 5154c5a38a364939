"""Independent exact reference computations used to check the algorithms.

Nothing in here is called by the algorithms themselves.
"""

from .brute import brute_force_mwm, exhaustive_mwm, matching_number
from .generators import (
    InfeasibleParams,
    dense_splitting_instance,
    disjoint_edges,
    generate,
    random_hypergraph,
    random_weights,
    ring,
    star,
    union_of_forests,
)
from .montecarlo import monte_carlo_expectation
from .simplex import (
    LPInstance,
    LPSolution,
    TooLarge,
    check_dual,
    exact_fractional_opt,
    exact_fractional_solution,
    solve_packing,
)

__all__ = [
    "InfeasibleParams",
    "LPInstance",
    "LPSolution",
    "TooLarge",
    "brute_force_mwm",
    "check_dual",
    "dense_splitting_instance",
    "disjoint_edges",
    "exact_fractional_opt",
    "exact_fractional_solution",
    "exhaustive_mwm",
    "generate",
    "matching_number",
    "monte_carlo_expectation",
    "random_hypergraph",
    "random_weights",
    "ring",
    "solve_packing",
    "star",
    "union_of_forests",
]
