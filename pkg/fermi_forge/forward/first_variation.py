import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily

from .msq_residual import msq_residual


def first_variation(
    family: MetricFamily, mesh: Mesh, u: np.ndarray, w: np.ndarray
) -> float:
    """
    Directional derivative of the area at u in direction w,

        d/dt Vol(u + t w) at t = 0.

    This is the full first variation: when w does not vanish on the
    boundary it includes ``boundary_term(family, mesh, u, w)``.
    """
    return float(msq_residual(family, mesh, u) @ w)


def boundary_term(
    family: MetricFamily, mesh: Mesh, u: np.ndarray, w: np.ndarray
) -> float:
    """
    Part of the first variation carried by the boundary values of w: the
    flux pairing int_{boundary} w (1 + |grad u|^2)^{-1/2} d_nu u dS,
    discretized as the residual at boundary nodes against w.
    """
    boundary = mesh.all_boundary_nodes
    residual = msq_residual(family, mesh, u)
    return float(residual[boundary] @ np.asarray(w)[boundary])
