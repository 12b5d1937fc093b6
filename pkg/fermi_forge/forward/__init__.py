from .area import area
from .density import AreaDensity, area_density, check_range, graph_jets
from .dn_from_volumes import VolumeDNCheck, dn_from_volumes
from .first_variation import boundary_term, first_variation
from .msq_residual import msq_jacobian, msq_residual
from .nonlinear_dn import graph_flux_trace, nonlinear_dn
from .solve_minimal_graph import (
    GraphSolution,
    solve_minimal_graph,
    well_posedness_radius,
)
