import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily

from .density import area_density


def area(family: MetricFamily, mesh: Mesh, u: np.ndarray) -> float:
    """
    Area of the graph of u in the metric ds^2 + g(x, s),

        Vol = int (1 + |grad u|^2_{g(x, u)})^{1/2} det(g(x, u))^{1/2} dx,

    with the gradient constant per triangle and the remaining factors
    sampled at the edge midpoints.

    Raises
    ------
    RangeViolationError
        When |u| exceeds the admissible band of the family.
    """
    density = area_density(family, mesh, u)
    return float(np.sum(mesh.areas[:, None] * density.value) / 3)
