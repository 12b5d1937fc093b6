"""
The discrete area functional. The area of the graph of u over the mesh is

    E(u) = sum_T |T| / 3 sum_q a(x_q, u_q, grad u_T),

with a(x, s, p) = d(x, s) (1 + p . k(x, s) p)^{1/2} evaluated at the edge
midpoints x_q. All residuals and Jacobians of the forward solver are exact
derivatives of E.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from fermi_forge.exceptions import RangeViolationError
from fermi_forge.geometry import Mesh, MetricFamily, MetricJets, evaluate_jets
from fermi_forge.pde_core import gradient, to_quadrature


@dataclass(frozen=True)
class AreaDensity:
    """
    The integrand a and its partial derivatives at the quadrature points:
    ``value``, ``ds``, ``dss`` have shape (n_triangles, 3), ``dp`` and
    ``dsp`` shape (n_triangles, 3, 2), and ``dpp`` shape
    (n_triangles, 3, 2, 2). Second derivatives are None when not requested.
    """

    value: np.ndarray
    ds: np.ndarray
    dp: np.ndarray
    dss: Optional[np.ndarray] = None
    dsp: Optional[np.ndarray] = None
    dpp: Optional[np.ndarray] = None


def check_range(family: MetricFamily, u: np.ndarray):
    """
    Raises RangeViolationError when |u| exceeds the admissible band of the
    family.
    """
    u_max = float(np.max(np.abs(u), initial=0))

    if not np.isfinite(u_max) or u_max > family.s_max:
        msg = f"Graph leaves the band |u| <= {family.s_max}: max |u| {u_max}."
        raise RangeViolationError(msg)


def graph_jets(family: MetricFamily, mesh: Mesh, u: np.ndarray) -> MetricJets:
    """
    Jets of the family at the quadrature points, evaluated at s = u(x_q).
    """
    check_range(family, u)
    s = to_quadrature(mesh, u)
    return evaluate_jets(family, mesh.quadrature_points, s)


def area_density(
    family: MetricFamily,
    mesh: Mesh,
    u: np.ndarray,
    second_order: bool = False,
) -> AreaDensity:
    """
    Evaluates the area integrand and its derivatives with respect to s = u
    and p = grad u.
    """
    jets = graph_jets(family, mesh, u)
    p = np.broadcast_to(gradient(mesh, u)[:, None, :], jets.g.shape[:-1])

    def form(tensor):
        return np.einsum("tqi,tqij,tqj->tq", p, tensor, p)

    kp = np.einsum("tqij,tqj->tqi", jets.k, p)
    W = np.sqrt(1 + form(jets.k))
    Q1 = form(jets.k1)

    value = jets.d * W
    ds = jets.d1 * W + jets.d * Q1 / (2 * W)
    dp = (jets.d / W)[..., None] * kp

    if not second_order:
        return AreaDensity(value, ds, dp)

    Q2 = form(jets.k2)
    k1p = np.einsum("tqij,tqj->tqi", jets.k1, p)

    dss = (
        jets.d2 * W
        + jets.d1 * Q1 / W
        + jets.d * (Q2 / (2 * W) - Q1**2 / (4 * W**3))
    )
    dsp = (
        (jets.d1 / W)[..., None] * kp
        + (jets.d / W)[..., None] * k1p
        - (jets.d * Q1 / (2 * W**3))[..., None] * kp
    )
    dpp = (jets.d / W)[..., None, None] * jets.k - (
        jets.d / W**3
    )[..., None, None] * np.einsum("tqi,tqj->tqij", kp, kp)

    return AreaDensity(value, ds, dp, dss, dsp, dpp)
