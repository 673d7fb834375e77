"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
status the command line front end uses when it surfaces the error.
"""


class UtilityError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"
    exit_code = 2


class SpecError(UtilityError, ValueError):
    """A problem specification is malformed or names an invalid field."""

    code = "spec_error"


class DomainError(UtilityError, ValueError):
    """Domain bounds are out of order or a point falls outside the domain."""

    code = "domain_error"


class GridSizeError(UtilityError, ValueError):
    code = "grid_size_error"


class GridMismatchError(UtilityError, ValueError):
    code = "grid_mismatch"


class NegativeDensityError(UtilityError, ValueError):
    code = "negative_density"


class ZeroMassError(UtilityError, ValueError):
    code = "zero_mass"


class NormalizationError(UtilityError, ValueError):
    code = "normalization_error"


class OrderingError(UtilityError, ValueError):
    """Utility points or vectors violate the preference order."""

    code = "ordering_error"


class MonotonicityError(UtilityError, ValueError):
    """A utility function or surface decreases somewhere."""

    code = "monotonicity_error"


class ZeroDenominatorError(UtilityError, ValueError):
    """A conditional utility was requested where its normalizer vanishes."""

    code = "zero_denominator"


class DegenerateMarginalError(UtilityError, ValueError):
    code = "degenerate_marginal"


class ImpulseLimitError(DomainError):
    """Risk aversion so extreme that the density is effectively an impulse."""

    code = "impulse_limit"


class InfeasibleError(UtilityError, ValueError):
    """Constraint targets cannot be met by any density on the domain."""

    code = "infeasible"
    exit_code = 3


class ConvergenceError(UtilityError, RuntimeError):
    """The dual Newton iteration stopped before meeting its tolerance."""

    code = "nonconvergence"
    exit_code = 4

    def __init__(self, message, residuals=None, iterations=None):
        super().__init__(message)
        self.residuals = residuals
        self.iterations = iterations
