import logging
from dataclasses import dataclass
from typing import Optional

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import BoundaryFunction

from .msq_residual import msq_residual
from .solve_minimal_graph import solve_minimal_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VolumeDNCheck:
    """
    The two sides of the volumes-to-DN relation: the centered difference of
    the area of minimal graphs, and the flux pairing of the DN map with w.
    """

    finite_difference: float
    boundary_integral: float

    @property
    def difference(self) -> float:
        return abs(self.finite_difference - self.boundary_integral)


def dn_from_volumes(
    family: MetricFamily,
    mesh: Mesh,
    f: Optional[BoundaryFunction],
    w: BoundaryFunction,
    t: float = 1e-3,
    tol: float = 1e-12,
) -> VolumeDNCheck:
    """
    Compares the derivative of the area of minimal graphs in the direction
    of the boundary data w,

        (Vol(u_{f + t w}) - Vol(u_{f - t w})) / 2t,

    with the boundary integral int w (1 + |grad u|^2)^{-1/2} d_nu u dS at
    the minimal graph u_f. The two agree up to O(t^2) and the mesh error.
    """
    if f is None:
        f = BoundaryFunction.zeros(mesh.domain, w.n_modes)

    plus = solve_minimal_graph(family, mesh, f + t * w, tol)
    minus = solve_minimal_graph(family, mesh, f - t * w, tol)
    finite_difference = (plus.area - minus.area) / (2 * t)

    center = solve_minimal_graph(family, mesh, f, tol)
    boundary = mesh.all_boundary_nodes
    flux = msq_residual(family, mesh, center.u)[boundary]
    boundary_integral = float(flux @ w.sample(mesh)[boundary])

    check = VolumeDNCheck(finite_difference, boundary_integral)
    logger.info(
        f"Volumes vs DN pairing: {finite_difference:.6e} vs "
        f"{boundary_integral:.6e}."
    )
    return check
