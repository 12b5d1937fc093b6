"""
Periods of the conjugate differential *du of harmonic functions on the
annulus, and the projection of boundary data onto traces whose harmonic
extension has a single-valued harmonic conjugate.
"""
import logging
from collections import defaultdict
from typing import Sequence, Union

import numpy as np

from fermi_forge.geometry import Mesh
from fermi_forge.pde_core import (
    DEFAULT_N_MODES,
    BoundaryFunction,
    assemble_operator,
    gradient,
    solve_dirichlet,
)

logger = logging.getLogger(__name__)


def _check_annulus(mesh: Mesh):
    if mesh.domain.kind != "annulus":
        raise ValueError("Periods need an annulus mesh.")


def loop_ring(mesh: Mesh, radius: float) -> np.ndarray:
    """
    Returns the node ring of the mesh closest to the given radius, in
    counterclockwise order.

    Raises
    ------
    ValueError
        When the closest ring is a boundary circle, i.e., the loop is not
        interior.
    """
    _check_annulus(mesh)
    radii = np.array([np.hypot(*mesh.nodes[ring[0]]) for ring in mesh.rings])
    idx = int(np.argmin(np.abs(radii - radius)))

    if idx in (0, len(mesh.rings) - 1):
        msg = f"Loop of radius {radius} is not interior to the annulus."
        raise ValueError(msg)

    return mesh.rings[idx]


def loop_period(
    mesh: Mesh, u: np.ndarray, ring: np.ndarray
) -> Union[float, complex]:
    """
    int_gamma *du = int_gamma grad u . nu ds over the polygon through the
    ring nodes, with nu pointing away from the origin. Each edge uses its
    midpoint value of grad u, averaged over the two triangles sharing it.
    """
    edge_triangles = defaultdict(list)
    for idx, tri in enumerate(mesh.triangles):
        for a in range(3):
            edge = frozenset((tri[a], tri[(a + 1) % 3]))
            edge_triangles[edge].append(idx)

    grads = gradient(mesh, u)
    start, end = ring, np.roll(ring, -1)
    tangent = mesh.nodes[end] - mesh.nodes[start]
    normals = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)

    midpoints = 0.5 * (mesh.nodes[start] + mesh.nodes[end])
    flip = np.einsum("ei,ei->e", normals, midpoints) < 0
    normals[flip] *= -1

    total = 0j
    for i, j, normal in zip(start, end, normals):
        tris = edge_triangles[frozenset((i, j))]
        grad = np.mean(grads[tris], axis=0)
        # The unnormalized normal carries the edge length.
        total += grad @ normal

    return complex(total) if np.iscomplexobj(u) else float(total.real)


def homology_periods(
    mesh: Mesh, u: np.ndarray, loops: Sequence[float] = (0.75,)
) -> list:
    """
    Periods of *du along mesh loops between the boundary circles.

    Parameters
    ----------
    mesh
        An annulus mesh.
    u
        Nodal harmonic function.
    loops
        Radii of the loops; each is snapped to the closest node ring.

    Returns
    -------
    list
        One period per loop, complex for complex u. A harmonic conjugate
        of u exists iff they vanish.
    """
    return [loop_period(mesh, u, loop_ring(mesh, r)) for r in loops]


def harmonic_extension(mesh: Mesh, f: BoundaryFunction) -> np.ndarray:
    return solve_dirichlet(assemble_operator(mesh), f)


def log_trace(
    mesh: Mesh, n_modes: int = DEFAULT_N_MODES
) -> BoundaryFunction:
    """
    Trace of log r, the basis function of the one-dimensional cohomology of
    the annulus.
    """

    def func(x, y):
        return np.log(np.hypot(x, y))

    return BoundaryFunction.from_callable(mesh.domain, func, n_modes)


def project_to_conjugable(
    mesh: Mesh, f: BoundaryFunction, loop: float = 0.75
) -> BoundaryFunction:
    """
    The projection f - a(f) f_1 with f_1 the trace of log r and
    a(f) = period(f) / period(f_1), so that the harmonic extension of the
    result has zero period. The map is linear and idempotent, and it is
    the identity on period-free traces.
    """
    ring = loop_ring(mesh, loop)
    basis = log_trace(mesh, f.n_modes)

    period = loop_period(mesh, harmonic_extension(mesh, f), ring)
    reference = loop_period(mesh, harmonic_extension(mesh, basis), ring)
    coefficient = period / reference

    logger.debug(f"Period coefficient {coefficient:.4g} removed.")
    return f - basis * coefficient
