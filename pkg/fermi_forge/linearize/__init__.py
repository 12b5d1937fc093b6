from .apply_pj import apply_pj
from .apply_pjk import apply_pjk, pjk_terms
from .boundary_terms import (
    BoundaryQuadrature,
    BoundaryTrace,
    measure_weighted,
    second_identity_boundary,
    third_identity_boundary,
)
from .bundle import LinearizationBundle, linearization_bundle
from .finite_differences import (
    DEFAULT_EPS,
    dn_derivative,
    graph_derivative,
    mixed_difference,
)
from .first_linearized_operator import first_linearized_operator
from .forms import (
    FormCoefficients,
    QuadratureField,
    contract,
    form_coefficients,
    quadrature_field,
)
from .identity_report import THIRD_ORDER_GROUPS, IdentityReport
from .solve_first_lin import solve_first_lin
from .solve_second_lin import second_lin_terms, solve_second_lin
from .solve_third_lin import solve_third_lin, splittings, third_lin_terms
from .verify_identity_2 import verify_identity_2
from .verify_identity_3 import verify_identity_3
