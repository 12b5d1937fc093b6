from .build_mesh import MAX_LEVEL, build_mesh
from .check_minimality import MinimalityReport, check_minimality
from .domain import BoundaryCircle, Domain, annulus, unit_disk
from .mesh import Mesh
from .metric_family import (
    METRIC_CATALOG,
    ConformalFamily,
    EuclideanFamily,
    ExponentialFamily,
    MetricFamily,
    NonminimalFamily,
    NumericMetricFamily,
    ShearFamily,
    make_family,
)
from .metric_jets import MetricJets, evaluate_jets, metric_jets
from .profiles import boundary_flat_cutoff, gaussian, profile
from .tensor_field import TensorField2, diagonal_tensor, offdiagonal_tensor
