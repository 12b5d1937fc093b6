from typing import Optional

import numpy as np

from .assemble_operator import EllipticOperator
from .boundary_function import DEFAULT_N_MODES, BoundaryFunction
from .quadrature import gradient

TRACE_METHODS = ("variational", "naive")


def boundary_flux(
    op: EllipticOperator, u: np.ndarray, source: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Nodal flux functional F_i = a(u, phi_i) + S(phi_i). For a solution of the
    interior problem, F vanishes at interior nodes, and at boundary nodes it
    equals the boundary integral of the conormal derivative against phi_i.
    """
    flux = op.apply(u)

    if source is not None:
        flux = flux + source

    return flux


def neumann_trace(
    op: EllipticOperator,
    u: np.ndarray,
    n_modes: int = DEFAULT_N_MODES,
    source: Optional[np.ndarray] = None,
    method: str = "variational",
) -> BoundaryFunction:
    """
    Computes the conormal derivative d (A grad u) . nu of a solution on the
    boundary.

    Parameters
    ----------
    op
        The operator u solves.
    u
        Nodal solution of the interior problem.
    n_modes
        Fourier truncation of the returned trace.
    source
        Source functional of the interior problem, if any.
    method
        "variational" recovers the trace from the weak-form residual at the
        boundary nodes. "naive" differentiates u in the boundary triangles
        along the outward normal, which is one order less accurate.

    Returns
    -------
    BoundaryFunction
        The conormal trace.
    """
    if method == "variational":
        flux = boundary_flux(op, u, source)
        return BoundaryFunction.from_functional(op.mesh, flux, n_modes)

    if method == "naive":
        return _naive_trace(op, u, n_modes)

    msg = f"Unknown trace method {method!r}; use one of {TRACE_METHODS}."
    raise ValueError(msg)


def _naive_trace(
    op: EllipticOperator, u: np.ndarray, n_modes: int
) -> BoundaryFunction:
    mesh = op.mesh
    grads = gradient(mesh, u)
    values = np.zeros(mesh.n_nodes, dtype=grads.dtype)
    counts = np.zeros(mesh.n_nodes)

    for edges in mesh.boundary_edges:
        tris = edges.triangles
        tensor = op.conormal_tensor[tris]
        conormal = np.einsum(
            "eij,ej,ei->e", tensor, grads[tris], edges.normals
        )
        # Each boundary node averages its two adjacent boundary edges.
        for end in range(2):
            np.add.at(values, edges.nodes[:, end], conormal)
            np.add.at(counts, edges.nodes[:, end], 1)

    boundary = mesh.all_boundary_nodes
    values[boundary] /= counts[boundary]
    return BoundaryFunction.from_nodal(mesh, values, n_modes)
