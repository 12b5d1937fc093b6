from typing import Optional

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily

from .forms import (
    FormCoefficients,
    form_coefficients,
    gradient_load,
    quadrature_field,
)


def apply_pj(
    family: MetricFamily,
    mesh: Mesh,
    v_j: np.ndarray,
    target: np.ndarray,
    coefficients: Optional[FormCoefficients] = None,
) -> np.ndarray:
    """
    Applies P^j = -div_g(v^j g k1 grad .) to ``target`` in weak form, i.e.,
    returns the nodal functional

        phi_i -> int v^j k1(grad target, grad phi_i) dV_g.

    Paired with a field v^m this is int v^j k1(grad target, grad v^m) dV_g,
    which equals int v^m P^j target dV_g plus the boundary term
    int_{boundary} v^m v^j k1(nu, grad target) dS_g.
    """
    if coefficients is None:
        coefficients = form_coefficients(family, mesh)

    v = quadrature_field(mesh, v_j)
    t = quadrature_field(mesh, target)
    return gradient_load(mesh, v.values, coefficients.b1, t.grad)
