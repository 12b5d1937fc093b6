import numpy as np

from .assemble_operator import EllipticOperator
from .quadrature import load_vector, to_quadrature
from .solve_dirichlet import solve_dirichlet


def green_solve(op: EllipticOperator, rhs: np.ndarray) -> np.ndarray:
    """
    Solves op(u) = rhs in the interior with zero Dirichlet data, i.e.,
    -d^{-1} div(A d grad u) + q u = rhs. The right-hand side is a nodal field
    and is paired with the test functions in the d-weighted L2 product.
    """
    weighted = op.weight * to_quadrature(op.mesh, rhs)
    return solve_dirichlet(op, None, source=-load_vector(op.mesh, weighted))
