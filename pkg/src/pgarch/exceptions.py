"""Exception and warning classes raised across the package."""

import numpy as np


class OrderError(ValueError):
    """Operation undefined for the model orders supplied."""


class DegenerateError(ValueError):
    """Input is degenerate (zero matrices, constant innovations, ...)."""


class PreconditionError(ValueError):
    """A documented precondition of the operation does not hold."""


class SingularInformationError(np.linalg.LinAlgError):
    pass


class AllStartsFailedError(RuntimeError):
    pass


class ExcessiveExclusionsError(RuntimeError):
    """Too many Monte Carlo replications failed to produce a fit."""


class MomentWarning(UserWarning):
    """Innovation law lacks the moments required for normal-theory inference."""


class DegenerateResidualWarning(RuntimeWarning):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass


class ConvergenceWarning(RuntimeWarning):
    pass
