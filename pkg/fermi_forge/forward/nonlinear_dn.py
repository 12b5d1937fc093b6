import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily, evaluate_jets
from fermi_forge.pde_core import (
    DEFAULT_N_MODES,
    BoundaryFunction,
    boundary_frame,
)
from fermi_forge.pde_core.quadrature import bilinear

from .msq_residual import msq_residual
from .solve_minimal_graph import GraphSolution, solve_minimal_graph


def nonlinear_dn(
    family: MetricFamily,
    mesh: Mesh,
    f: BoundaryFunction,
    n_modes: int = DEFAULT_N_MODES,
    tol: float = 1e-12,
) -> BoundaryFunction:
    """
    Nonlinear DN map f -> d_nu u of the minimal graph u with boundary values
    f, where nu is the unit conormal of the metric g_u = g(x, u(x)).

    The map is recovered variationally: the boundary residual of the area
    functional is the flux functional
    phi -> int phi (1 + |grad u|^2_{g_u})^{-1/2} d_nu u dS_{g_u}, which is
    converted to d_nu u pointwise at the boundary nodes.
    """
    solution = solve_minimal_graph(family, mesh, f, tol)
    return graph_flux_trace(family, mesh, solution, n_modes)


def graph_flux_trace(
    family: MetricFamily,
    mesh: Mesh,
    solution: GraphSolution,
    n_modes: int = DEFAULT_N_MODES,
) -> BoundaryFunction:
    """
    Converts the boundary residual of a converged graph to d_nu u.

    At a boundary node with outward normal n and tangent t, the residual
    density is a = d W^{-1} p with p = k(n, grad u) and
    W^2 = 1 + p^2 / k(n, n) + (d_t u)^2 det(k) / k(n, n). The tangential
    slope d_t u comes from the boundary values, so p, and with it
    d_nu u = p / |n|_k, follow in closed form.
    """
    u = solution.u
    frame = boundary_frame(mesh)
    nodes = frame.nodes
    normals, tangents = frame.normals, frame.tangents

    jets = evaluate_jets(family, mesh.nodes[nodes], u[nodes])
    k_nn = bilinear(jets.k, normals, normals)
    k_det = np.linalg.det(jets.k)

    density = frame.density(msq_residual(family, mesh, u)) / jets.d
    slope = frame.tangential(u)
    tangential = 1 + slope**2 * k_det / k_nn
    p = density * np.sqrt(tangential / (1 - density**2 / k_nn))

    values = np.zeros(mesh.n_nodes)
    values[nodes] = p / np.sqrt(k_nn)
    return BoundaryFunction.from_nodal(mesh, values, n_modes)
