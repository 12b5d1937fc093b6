import logging
from typing import Optional, Sequence

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import DEFAULT_N_MODES, BoundaryFunction

from .boundary_terms import BoundaryQuadrature, second_identity_boundary
from .bundle import LinearizationBundle, linearization_bundle
from .finite_differences import DEFAULT_EPS, dn_derivative
from .forms import contract, quadrature_field
from .identity_report import IdentityReport
from .solve_second_lin import second_lin_terms

logger = logging.getLogger(__name__)


def verify_identity_2(
    family: MetricFamily,
    mesh: Mesh,
    data: Sequence[BoundaryFunction],
    indices: tuple[int, int, int] = (0, 1, 2),
    eps: float = DEFAULT_EPS,
    tol: float = 1e-12,
    bundle: Optional[LinearizationBundle] = None,
    n_modes: int = DEFAULT_N_MODES,
) -> IdentityReport:
    """
    Checks the integral identity for the second linearization,

        int f_m d^2 Lambda / d eps_j d eps_k dS_g
            = int v^m k1(grad v^k, grad v^j) + int v^k k1(grad v^j, grad v^m)
              + int v^j k1(grad v^k, grad v^m) + int h2 v^j v^k v^m / 2
              + B,

    where B = -int v^m k1(nu, grad v^{(j}) v^{k)} dS_g plus the variation
    of the g_u-conormal of Lambda. The left-hand side pairs the nonlinear
    DN map with f_m and is differentiated by the 4-point mixed stencil
    with step ``eps``. It shares no term with the right-hand side.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    data
        Real boundary data f_1, ..., f_n.
    indices
        The indices (j, k, m) into ``data``.
    eps
        Finite-difference step.
    tol
        Newton tolerance of the nonlinear solves.
    bundle
        A previously solved bundle of order at least 2 for ``data``.
    n_modes
        Fourier truncation of the nonlinear DN map.

    Returns
    -------
    IdentityReport
        Both sides, the named terms and the relative residual.
    """
    j, k, m = indices

    if bundle is None:
        bundle = linearization_bundle(family, mesh, data, order=2)

    v_j, v_k, v_m = bundle.v(j), bundle.v(k), bundle.v(m)
    fields = quadrature_field(mesh, v_j), quadrature_field(mesh, v_k)
    loads = second_lin_terms(mesh, bundle.coefficients, *fields)

    # Pairing the loads with v^m puts v^m in the test-function slot.
    names = {"k1": "k1_m", "pk_j": "k1_k", "pj_k": "k1_j", "h2": "h2"}
    terms = {names[key]: contract(load, v_m) for key, load in loads.items()}

    quadrature = BoundaryQuadrature(family, mesh, bundle.operator)
    traces = [quadrature.trace(item) for item in (v_m, v_j, v_k)]
    boundary = second_identity_boundary(quadrature, *traces)

    directions = [data[j], data[k]]
    lhs = dn_derivative(family, mesh, directions, data[m], eps, tol, n_modes)
    scale = np.prod([data[idx].norm() for idx in indices])
    report = IdentityReport(
        2, tuple(indices), lhs, terms, boundary, scale=float(scale)
    )

    logger.info(
        f"Second-order identity {indices}: lhs = {report.lhs:.6e}, "
        f"rhs = {report.rhs:.6e}, residual = {report.residual:.2e}."
    )
    return report
