from . import (
    asymptotics,
    calderon,
    cgo,
    formats,
    forward,
    geometry,
    linearize,
    pde_core,
)
from .exceptions import (
    ConfigError,
    DegenerateMeshError,
    EigenvalueCollisionError,
    GoldenMismatchError,
    NewtonDivergenceError,
    NonSPDMetricError,
    RangeViolationError,
    ResourceError,
    SeriesDivergenceError,
    UnderResolvedOscillationError,
)
from .parallel import parallel_map
