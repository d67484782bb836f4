"""Edge deletion in DAGs so that no path with k edges survives.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .distributions import builtin_densities, difference_cdf, sup_ratio
from .errors import DedError
from .exact import exact_solve, full_lp
from .graph import build_instance, is_feasible
from .instances import generate, parse_instance
from .lp import solve_lp
from .rounding import (
    bipartite_correlated,
    cut_rule,
    derandomize,
    discrete,
    independent,
    monte_carlo_round,
    structured_round,
)

__all__ = [
    "DedError",
    "bipartite_correlated",
    "build_instance",
    "builtin_densities",
    "cut_rule",
    "derandomize",
    "difference_cdf",
    "discrete",
    "exact_solve",
    "full_lp",
    "generate",
    "independent",
    "is_feasible",
    "monte_carlo_round",
    "parse_instance",
    "solve_lp",
    "structured_round",
    "sup_ratio",
]
