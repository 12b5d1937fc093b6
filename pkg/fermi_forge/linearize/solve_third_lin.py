from collections import defaultdict
from typing import Optional, TypeVar

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import EllipticOperator, load_vector, solve_dirichlet

from .apply_pjk import pjk_terms
from .first_linearized_operator import first_linearized_operator
from .forms import (
    FormCoefficients,
    QuadratureField,
    form_coefficients,
    gradient_load,
    pair,
    quadrature_field,
)

_F = TypeVar("_F")


def solve_third_lin(
    family: MetricFamily,
    mesh: Mesh,
    v: tuple[np.ndarray, np.ndarray, np.ndarray],
    w: tuple[np.ndarray, np.ndarray, np.ndarray],
    op: Optional[EllipticOperator] = None,
    coefficients: Optional[FormCoefficients] = None,
) -> np.ndarray:
    """
    Solves the third linearized equation

        (Delta_g + h1 / 2) w^{jkl} + P^{(jk} v^{l)} + P^{(j} w^{kl)}
            + k2(grad v^{(j}, grad v^k) v^{l)} + k1(grad v^{(j}, grad w^{kl)})
            + g(grad v^{(j}, grad v^k) v^{l)} h1 / 2 + w^{(jk} v^{l)} h2 / 2
            + (h3 / 2 + 3 h1^2 / 4) v^j v^k v^l = 0

    with zero boundary data, where the round brackets sum over the three
    ways of splitting (j, k, l) into a pair and a single index. The source
    is the fourth derivative of the discrete area functional plus its third
    derivative contracted with the second linearizations, so the solution
    is the exact mixed third derivative of the discrete solution map.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    v
        The first linearizations (v^j, v^k, v^l).
    w
        The second linearizations (w^{jk}, w^{jl}, w^{kl}).
    op
        The first linearized operator, to reuse its factorization.
    coefficients
        Precomputed form coefficients.

    Returns
    -------
    np.ndarray
        The nodal field w^{jkl}.

    Raises
    ------
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of Delta_g + h1 / 2.
    """
    if op is None:
        op = first_linearized_operator(family, mesh)

    if coefficients is None:
        coefficients = form_coefficients(family, mesh)

    v_fields = tuple(quadrature_field(mesh, item) for item in v)
    w_fields = tuple(quadrature_field(mesh, item) for item in w)
    terms = third_lin_terms(mesh, coefficients, v_fields, w_fields)
    return solve_dirichlet(op, None, sum(terms.values()))


def splittings(
    v: tuple[_F, _F, _F], w: tuple[_F, _F, _F]
) -> list[tuple[_F, ...]]:
    """
    The three splittings of (j, k, l) into a pair (a, b) and a single index
    c, as tuples (v^a, v^b, w^{ab}, v^c). ``w`` is ordered as
    (w^{jk}, w^{jl}, w^{kl}).
    """
    v_j, v_k, v_l = v
    w_jk, w_jl, w_kl = w
    return [
        (v_j, v_k, w_jk, v_l),
        (v_j, v_l, w_jl, v_k),
        (v_k, v_l, w_kl, v_j),
    ]


def third_lin_terms(
    mesh: Mesh,
    coefficients: FormCoefficients,
    v: tuple[QuadratureField, QuadratureField, QuadratureField],
    w: tuple[QuadratureField, QuadratureField, QuadratureField],
) -> dict[str, np.ndarray]:
    """
    Weak-form terms of the third linearized source as nodal functionals of
    the test function phi. Sums run over the splittings (a, b | c):

    - ``pjk_mean``, ``pjk_curvature``, ``pjk_w``, ``principal``: the pieces
      of P^{ab} v^c;
    - ``pj_w``: P^c w^{ab}, i.e., int v^c b1(grad w^{ab}, grad phi);
    - ``k2_grad``: int v^c d k2(grad v^a, grad v^b) phi;
    - ``h1_grad``: int v^c a2_mean(grad v^a, grad v^b) phi;
    - ``k1_w``: int b1(grad w^{ab}, grad v^c) phi;
    - ``h2_w``: int d3 w^{ab} v^c phi;
    - ``h3``: int d4 v^j v^k v^l phi.
    """
    c = coefficients
    terms = defaultdict(float)

    for v_a, v_b, w_ab, v_c in splittings(v, w):
        for name, value in pjk_terms(mesh, c, v_a, v_b, w_ab, v_c).items():
            key = "principal" if name == "principal" else f"pjk_{name}"
            terms[key] += value

        curvature = pair(c.a2_curvature, v_a.grad, v_b.grad)
        mean = pair(c.a2_mean, v_a.grad, v_b.grad)
        cross = pair(c.b1, w_ab.grad, v_c.grad)

        terms["pj_w"] += gradient_load(mesh, v_c.values, c.b1, w_ab.grad)
        terms["k2_grad"] += load_vector(mesh, v_c.values * curvature)
        terms["h1_grad"] += load_vector(mesh, v_c.values * mean)
        terms["k1_w"] += load_vector(mesh, cross)
        terms["h2_w"] += load_vector(mesh, c.d3 * w_ab.values * v_c.values)

    product = v[0].values * v[1].values * v[2].values
    terms["h3"] = load_vector(mesh, c.d4 * product)
    return dict(terms)
