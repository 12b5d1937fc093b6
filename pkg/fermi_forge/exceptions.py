class ConfigError(ValueError):
    """
    Raised when an experiment configuration fails validation. The message
    names the offending field.
    """


class RangeViolationError(ValueError):
    """
    Raised when a graph leaves the admissible band |u| <= s_max of the
    metric family.
    """


class NonSPDMetricError(ValueError):
    """
    Raised when a metric family evaluates to a matrix that is not symmetric
    positive definite.
    """


class DegenerateMeshError(ValueError):
    """
    Raised for zero-area triangles or non-positive operator weights.
    """


class EigenvalueCollisionError(RuntimeError):
    """
    Raised when zero is (numerically) a Dirichlet eigenvalue of the operator
    being solved, i.e., the interior system is singular or its condition
    estimate exceeds the collision threshold.
    """


class NewtonDivergenceError(RuntimeError):
    """
    Raised when damped Newton cannot decrease the residual.
    """


class SeriesDivergenceError(RuntimeError):
    """
    Raised when the Neumann series of a CGO remainder does not contract.
    """


class UnderResolvedOscillationError(RuntimeError):
    """
    Raised when the grid cannot resolve the oscillation e^{2i psi / h}.
    """


class ResourceError(RuntimeError):
    """
    Raised when a request exceeds the documented size caps.
    """


class GoldenMismatchError(RuntimeError):
    """
    Raised when an output directory does not match its golden reference.
    """
