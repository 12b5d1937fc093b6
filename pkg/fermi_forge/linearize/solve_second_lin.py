from typing import Optional

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import EllipticOperator, load_vector, solve_dirichlet

from .first_linearized_operator import first_linearized_operator
from .forms import (
    FormCoefficients,
    QuadratureField,
    form_coefficients,
    gradient_load,
    pair,
    quadrature_field,
)


def solve_second_lin(
    family: MetricFamily,
    mesh: Mesh,
    v_j: np.ndarray,
    v_k: np.ndarray,
    op: Optional[EllipticOperator] = None,
    coefficients: Optional[FormCoefficients] = None,
) -> np.ndarray:
    """
    Solves the second linearized equation

        (Delta_g + h1 / 2) w + P^j v^k + P^k v^j + k1(grad v^j, grad v^k)
            + h2 v^j v^k / 2 = 0

    with w = 0 on the boundary. The source is the third derivative of the
    discrete area functional at the zero graph, so w is the exact mixed
    second derivative of the discrete solution map.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    v_j, v_k
        First linearizations.
    op
        The first linearized operator, to reuse its factorization.
    coefficients
        Precomputed form coefficients.

    Returns
    -------
    np.ndarray
        The nodal field w^{jk}.

    Raises
    ------
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of Delta_g + h1 / 2.
    """
    if op is None:
        op = first_linearized_operator(family, mesh)

    if coefficients is None:
        coefficients = form_coefficients(family, mesh)

    fields = quadrature_field(mesh, v_j), quadrature_field(mesh, v_k)
    source = sum(second_lin_terms(mesh, coefficients, *fields).values())
    return solve_dirichlet(op, None, source)


def second_lin_terms(
    mesh: Mesh,
    coefficients: FormCoefficients,
    v_j: QuadratureField,
    v_k: QuadratureField,
) -> dict[str, np.ndarray]:
    """
    Weak-form terms of the second linearized source, as nodal functionals
    of the test function phi:

    - ``pj_k``: P^j v^k, i.e., int v^j b1(grad v^k, grad phi);
    - ``pk_j``: P^k v^j, i.e., int v^k b1(grad v^j, grad phi);
    - ``k1``: int b1(grad v^j, grad v^k) phi;
    - ``h2``: int d3 v^j v^k phi, where d3 = d h2 / 2 on minimal families.
    """
    c = coefficients
    return {
        "pj_k": gradient_load(mesh, v_j.values, c.b1, v_k.grad),
        "pk_j": gradient_load(mesh, v_k.values, c.b1, v_j.grad),
        "k1": load_vector(mesh, pair(c.b1, v_j.grad, v_k.grad)),
        "h2": load_vector(mesh, c.d3 * v_j.values * v_k.values),
    }
