from typing import Optional, Union

import numpy as np

from .assemble_operator import EllipticOperator
from .boundary_function import BoundaryFunction

BoundaryData = Union[BoundaryFunction, np.ndarray, None]


def solve_dirichlet(
    op: EllipticOperator,
    f: BoundaryData,
    source: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Solves the Dirichlet problem op(u) + source = 0 in the interior with
    u = f on the boundary.

    Parameters
    ----------
    op
        The assembled operator.
    f
        Boundary data: a BoundaryFunction, a nodal vector whose boundary
        entries are used, or None for zero data.
    source
        Optional nodal functional phi_i -> S(phi_i) added to the weak form.
        The right-hand side of op(u) = rhs corresponds to source = -M rhs.

    Returns
    -------
    np.ndarray
        The nodal solution, complex when the data is.

    Raises
    ------
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of the operator.
    """
    mesh = op.mesh
    u = boundary_lift(mesh, f)

    if source is not None and np.iscomplexobj(source):
        u = u.astype(complex)

    interior = mesh.interior_nodes
    rhs = -(op.matrix @ u)[interior]

    if source is not None:
        rhs = rhs - source[interior]

    u[interior] = op.interior_factor.solve(rhs)

    if not np.all(np.isfinite(u)):
        raise FloatingPointError("Dirichlet solve produced non-finite values.")

    return u


def boundary_lift(mesh, f: BoundaryData) -> np.ndarray:
    """
    Nodal vector equal to the boundary data on the boundary and zero in
    the interior.
    """
    if f is None:
        return np.zeros(mesh.n_nodes)

    if isinstance(f, BoundaryFunction):
        return f.sample(mesh)

    values = np.zeros_like(np.asarray(f), dtype=np.result_type(f, float))
    boundary = mesh.all_boundary_nodes
    values[boundary] = np.asarray(f)[boundary]
    return values
