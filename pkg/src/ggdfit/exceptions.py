"""Error types raised by the fitting and sampling machinery."""


class GgdFitError(Exception):
    """Base class for all package-specific errors."""


class DegenerateInputError(GgdFitError, ValueError):
    """All polynomial coefficients are zero; there is nothing to solve."""


class NoAdmissibleRootError(GgdFitError, RuntimeError):
    """No real root of the surrogate equation lies in the admissible interval.

    Carries the interval and every candidate root for diagnostics.
    """

    def __init__(self, lower, upper, roots):
        self.lower = lower
        self.upper = upper
        self.roots = tuple(roots)
        super().__init__(
            f"no root in ({lower!r}, {upper!r}); candidates: {self.roots!r}"
        )


class DomainEscapeError(GgdFitError, RuntimeError):
    """An update drove a parameter outside its positive domain."""

    def __init__(self, parameter, value):
        self.parameter = parameter
        self.value = value
        super().__init__(f"update drove {parameter} to non-positive value {value!r}")


class NumericError(GgdFitError, RuntimeError):
    """A numeric routine failed to converge or hit a singular value."""


class DegenerateWeightsError(GgdFitError, RuntimeError):
    """Importance weights are all zero or non-finite; resampling impossible."""


class IterationError(GgdFitError, RuntimeError):
    """An estimator run halted before completing; carries the partial trace.

    Attributes
    ----------
    iteration : int
        1-based index of the iteration that failed.
    trace : IterationTrace
        Points completed before the failure (always includes the start).
    """

    def __init__(self, iteration, trace, cause):
        self.iteration = iteration
        self.trace = trace
        super().__init__(f"iteration {iteration} failed: {cause}")
        self.__cause__ = cause
