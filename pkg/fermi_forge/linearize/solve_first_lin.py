import logging
from typing import Optional

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import (
    BoundaryFunction,
    EllipticOperator,
    solve_dirichlet,
)

from .first_linearized_operator import first_linearized_operator

logger = logging.getLogger(__name__)


def solve_first_lin(
    family: MetricFamily,
    mesh: Mesh,
    f: BoundaryFunction,
    op: Optional[EllipticOperator] = None,
) -> np.ndarray:
    """
    Solves the first linearized equation (Delta_g + h1 / 2) v = 0 with
    v = f on the boundary.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    f
        Boundary data. Complex data gives a complex solution.
    op
        A previously assembled first linearized operator. Passing it reuses
        its factorization.

    Returns
    -------
    np.ndarray
        The nodal solution v.

    Raises
    ------
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of Delta_g + h1 / 2.
    """
    if op is None:
        op = first_linearized_operator(family, mesh)

    v = solve_dirichlet(op, f)
    logger.debug(f"First linearization: max |v| = {np.abs(v).max():.3e}.")
    return v
