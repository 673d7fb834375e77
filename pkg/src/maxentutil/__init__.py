"""Maximum-entropy utility assignment and information measures for preferences.

Utility functions are treated like cumulative distributions: their
derivative is a nonnegative, unit-mass utility density. Partial preference
information (moments, known utility points, a reference shape) is turned
into the least committal utility by maximizing entropy or minimizing
KL-distance, and the usual information measures carry over to single- and
multi-attribute utility densities.
"""
__version__ = "0.1.0"

from maxentutil.errors import (  # noqa: E402
    ConvergenceError,
    InfeasibleError,
    SpecError,
    UtilityError,
)
from maxentutil.grid import (  # noqa: E402
    Grid,
    GridFunction,
    UtilityDensity1D,
    UtilityFunction1D,
    cumulative,
    differentiate,
    integrate,
    make_grid,
    normalize_density,
)
from maxentutil.maxent import (  # noqa: E402
    MaxEntProblem,
    MomentConstraint,
    UtilityPointConstraint,
    exponential_reference_density,
    jeffreys_density,
    maxent_utility_from_points,
    min_cross_entropy_density,
    shape_diagnostics,
    solve_maxent_density,
)
from maxentutil.metrics import (  # noqa: E402
    conditional_entropy,
    differential_entropy,
    kl_distance,
    mutual_preference,
)
from maxentutil.prospects import (  # noqa: E402
    maxent_utility_vector,
    sample_uniform_simplex,
    verify_propositions,
)

__all__ = [
    "ConvergenceError", "InfeasibleError", "SpecError", "UtilityError",
    "Grid", "GridFunction", "UtilityDensity1D", "UtilityFunction1D",
    "cumulative", "differentiate", "integrate", "make_grid", "normalize_density",
    "MaxEntProblem", "MomentConstraint", "UtilityPointConstraint",
    "exponential_reference_density", "jeffreys_density", "maxent_utility_from_points",
    "min_cross_entropy_density", "shape_diagnostics", "solve_maxent_density",
    "conditional_entropy", "differential_entropy", "kl_distance", "mutual_preference",
    "maxent_utility_vector", "sample_uniform_simplex", "verify_propositions",
]
