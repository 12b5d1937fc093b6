from typing import Optional

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily

from .forms import (
    FormCoefficients,
    QuadratureField,
    form_coefficients,
    gradient_load,
    pair,
    quadrature_field,
)


def apply_pjk(
    family: MetricFamily,
    mesh: Mesh,
    v_j: np.ndarray,
    v_k: np.ndarray,
    w_jk: np.ndarray,
    target: np.ndarray,
    coefficients: Optional[FormCoefficients] = None,
) -> np.ndarray:
    """
    Applies the second-order operator

        P^{jk} = -div_g(v^j v^k (g k2 + h1 / 2) grad .)
                 - div_g(w^{jk} g k1 grad .)
                 + div_g(g(grad v^j, grad v^k) grad .)

    to ``target`` in weak form, returning the nodal functional
    phi_i -> int P^{jk}(target) phi_i dV_g up to boundary terms.
    """
    if coefficients is None:
        coefficients = form_coefficients(family, mesh)

    fields = [quadrature_field(mesh, f) for f in (v_j, v_k, w_jk, target)]
    terms = pjk_terms(mesh, coefficients, *fields)
    return sum(terms.values())


def pjk_terms(
    mesh: Mesh,
    coefficients: FormCoefficients,
    v_j: QuadratureField,
    v_k: QuadratureField,
    w_jk: QuadratureField,
    target: QuadratureField,
) -> dict[str, np.ndarray]:
    """
    The weak-form pieces of P^{jk} applied to ``target``:

    - ``mean``: int v^j v^k a2_mean(grad target, grad phi), the h1 part;
    - ``curvature``: int v^j v^k d k2(grad target, grad phi);
    - ``w``: int w^{jk} b1(grad target, grad phi);
    - ``principal``: -int d g(grad v^j, grad v^k) g(grad target, grad phi).
    """
    c = coefficients
    product = v_j.values * v_k.values
    gradients = c.d * pair(c.k, v_j.grad, v_k.grad)

    return {
        "mean": gradient_load(mesh, product, c.a2_mean, target.grad),
        "curvature": gradient_load(mesh, product, c.a2_curvature, target.grad),
        "w": gradient_load(mesh, w_jk.values, c.b1, target.grad),
        "principal": -gradient_load(mesh, gradients, c.k, target.grad),
    }
