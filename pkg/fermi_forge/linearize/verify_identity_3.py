import logging
from typing import Optional, Sequence

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import DEFAULT_N_MODES, BoundaryFunction

from .boundary_terms import (
    BoundaryQuadrature,
    BoundaryTrace,
    third_identity_boundary,
)
from .bundle import LinearizationBundle, linearization_bundle
from .finite_differences import DEFAULT_EPS, dn_derivative
from .forms import contract, quadrature_field
from .identity_report import THIRD_ORDER_GROUPS, IdentityReport
from .solve_second_lin import second_lin_terms
from .solve_third_lin import splittings, third_lin_terms

logger = logging.getLogger(__name__)


def verify_identity_3(
    family: MetricFamily,
    mesh: Mesh,
    data: Sequence[BoundaryFunction],
    indices: tuple[int, int, int, int] = (0, 1, 2, 3),
    eps: float = DEFAULT_EPS,
    tol: float = 1e-12,
    bundle: Optional[LinearizationBundle] = None,
    n_modes: int = DEFAULT_N_MODES,
) -> IdentityReport:
    """
    Checks the integral identity for the third linearization,

        int f_m d^3 Lambda / d eps_j d eps_k d eps_l dS_g
            = principal + H + R + B,

    where the principal part sums g(grad v^a, grad v^b) g(grad v^c,
    grad v^m) over the three pairings (a, b | c) of (j, k, l), H collects
    the terms with k2, h3 and the h1 part of P^{jk}, R the terms with
    second linearizations and the h1 g(grad v, grad v) term, and B the
    boundary terms, including the variation of the g_u-conormal of Lambda.
    The left-hand side pairs the nonlinear DN map with f_m and is
    differentiated by the 8-point mixed stencil.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    data
        Real boundary data f_1, ..., f_n.
    indices
        The indices (j, k, l, m) into ``data``.
    eps
        Finite-difference step.
    tol
        Newton tolerance of the nonlinear solves.
    bundle
        A previously solved bundle of order 3 containing the triple
        (j, k, l).
    n_modes
        Fourier truncation of the nonlinear DN map.

    Returns
    -------
    IdentityReport
        Both sides, the named terms, the H, R and principal groups, and the
        relative residual.
    """
    j, k, ell, m = indices

    if bundle is None:
        triples = [(j, k, ell)]
        bundle = linearization_bundle(family, mesh, data, 3, triples)

    v = (bundle.v(j), bundle.v(k), bundle.v(ell))
    w = (bundle.w(j, k), bundle.w(j, ell), bundle.w(k, ell))
    v_m = bundle.v(m)

    v_fields = tuple(quadrature_field(mesh, item) for item in v)
    w_fields = tuple(quadrature_field(mesh, item) for item in w)
    loads = third_lin_terms(mesh, bundle.coefficients, v_fields, w_fields)
    terms = {name: contract(load, v_m) for name, load in loads.items()}

    quadrature = BoundaryQuadrature(family, mesh, bundle.operator)
    v_traces = tuple(quadrature.trace(item) for item in v)
    w_traces = tuple(
        _second_trace(quadrature, bundle, w_ab, pair)
        for w_ab, pair in zip(w, _pairs(v_fields, v_traces))
    )
    splits = splittings(v_traces, w_traces)
    boundary = third_identity_boundary(
        quadrature, quadrature.trace(v_m), splits
    )

    directions = [data[j], data[k], data[ell]]
    lhs = dn_derivative(family, mesh, directions, data[m], eps, tol, n_modes)
    scale = np.prod([data[idx].norm() for idx in indices])
    report = IdentityReport(
        3,
        tuple(indices),
        lhs,
        terms,
        boundary,
        THIRD_ORDER_GROUPS,
        float(scale),
    )

    logger.info(
        f"Third-order identity {indices}: lhs = {report.lhs:.6e}, "
        f"rhs = {report.rhs:.6e}, residual = {report.residual:.2e}, "
        f"H = {report.group('H'):.3e}, R = {report.group('R'):.3e}, "
        f"B = {report.B:.3e}."
    )
    return report


def _pairs(fields, traces):
    """
    The pairs (j, k), (j, l) and (k, l) in the order of ``splittings``.
    """
    return [
        (fields[a], fields[b], traces[a], traces[b])
        for a, b in ((0, 1), (0, 2), (1, 2))
    ]


def _second_trace(
    quadrature: BoundaryQuadrature,
    bundle: LinearizationBundle,
    w_ab: np.ndarray,
    pair: tuple,
) -> BoundaryTrace:
    field_a, field_b, trace_a, trace_b = pair
    mesh, coefficients = bundle.mesh, bundle.coefficients
    loads = second_lin_terms(mesh, coefficients, field_a, field_b)
    return quadrature.trace(
        w_ab,
        source=sum(loads.values()),
        correction=quadrature.cross_flux(trace_a, trace_b),
    )
