import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.geometry.mesh import EDGE_MIDPOINT_BASIS
from fermi_forge.pde_core import EllipticOperator, assemble_form, scatter

from .density import area_density


def msq_residual(
    family: MetricFamily, mesh: Mesh, u: np.ndarray
) -> np.ndarray:
    """
    Weak-form residual of the minimal surface equation, i.e., the gradient
    of the discrete area functional:

        R_i = int a_s(x, u, grad u) phi_i + a_p(x, u, grad u) . grad phi_i,

    with a = d (1 + |grad u|^2_{g_u})^{1/2} and g, k, d evaluated at
    s = u(x). Interior entries vanish at a solution; boundary entries form
    the flux functional of the graph.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    u
        Nodal values of the graph function.

    Returns
    -------
    np.ndarray
        The nodal residual vector.

    Raises
    ------
    RangeViolationError
        When |u| exceeds the admissible band of the family.
    """
    density = area_density(family, mesh, u)
    weights = (mesh.areas / 3)[:, None]

    local = np.einsum("tq,qa->ta", weights * density.ds, EDGE_MIDPOINT_BASIS)
    mean_dp = np.einsum("t,tqi->ti", mesh.areas / 3, density.dp)
    local += np.einsum("ti,tai->ta", mean_dp, mesh.basis_gradients)

    return scatter(mesh, local)


def msq_jacobian(
    family: MetricFamily, mesh: Mesh, u: np.ndarray
) -> EllipticOperator:
    """
    The Hessian of the discrete area functional at u, assembled as an
    operator whose interior block is the Newton matrix. At u = 0 on a
    minimal family it is the first linearized operator.
    """
    density = area_density(family, mesh, u, second_order=True)
    return assemble_form(
        mesh,
        tensor=density.dpp,
        scalar=density.dss,
        vector=density.dsp,
    )
