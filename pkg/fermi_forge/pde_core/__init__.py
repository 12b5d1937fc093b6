from .assemble_operator import (
    EllipticOperator,
    assemble_form,
    assemble_operator,
)
from .boundary_function import DEFAULT_N_MODES, BoundaryFunction
from .dn_matrix import DNMatrix, dn_matrix
from .factorization import COLLISION_THRESHOLD, InteriorFactor, factorize
from .green_solve import green_solve
from .neumann_trace import boundary_flux, neumann_trace
from .quadrature import (
    BoundaryFrame,
    boundary_frame,
    flux_load_vector,
    gradient,
    integrate,
    load_vector,
    scatter,
    to_quadrature,
)
from .solve_dirichlet import boundary_lift, solve_dirichlet
