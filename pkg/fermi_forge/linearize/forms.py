"""
Multilinear forms of the discrete area functional at the zero graph. The
higher linearized equations are the third and fourth derivatives of

    E(u) = sum_T |T| / 3 sum_q a(x_q, u_q, grad u_T),
    a(x, s, p) = d(x, s) (1 + p . k(x, s) p)^{1/2},

at u = 0, written as sums of named terms. Every term is returned as the
nodal load vector of its test-function slot, so pairing it with a nodal
field evaluates the form.
"""
from dataclasses import dataclass

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily, metric_jets
from fermi_forge.pde_core import flux_load_vector, gradient, to_quadrature


@dataclass(frozen=True, eq=False)
class FormCoefficients:
    """
    Taylor coefficients of the area integrand at (s, p) = (0, 0), at the
    quadrature points. With the jets d_n and k_n of the family:

    - ``k`` is the inverse metric and ``d`` the volume density;
    - ``b1 = d1 k + d k1`` multiplies s p.p in the cubic part;
    - ``a2_mean = d2 k + 2 d1 k1`` and ``a2_curvature = d k2`` make up the
      coefficient of s^2 p.p / 4 in the quartic part;
    - ``d3`` and ``d4`` are the pure s-derivatives of d.

    On minimal families d1 = 0 and d2 = d h1 / 2, so b1 = d k1 and a2_mean
    = d h1 k / 2.
    """

    d: np.ndarray
    k: np.ndarray
    b1: np.ndarray
    a2_mean: np.ndarray
    a2_curvature: np.ndarray
    d3: np.ndarray
    d4: np.ndarray


def form_coefficients(family: MetricFamily, mesh: Mesh) -> FormCoefficients:
    jets = metric_jets(family, mesh, at="quadrature")

    def scaled(scalar, tensor):
        return scalar[..., None, None] * tensor

    return FormCoefficients(
        d=jets.d,
        k=jets.k,
        b1=scaled(jets.d1, jets.k) + scaled(jets.d, jets.k1),
        a2_mean=scaled(jets.d2, jets.k) + 2 * scaled(jets.d1, jets.k1),
        a2_curvature=scaled(jets.d, jets.k2),
        d3=jets.d3,
        d4=jets.d4,
    )


@dataclass(frozen=True)
class QuadratureField:
    """
    A P1 field at the quadrature points: values of shape (n_triangles, 3)
    and the per-triangle gradient, shape (n_triangles, 2).
    """

    values: np.ndarray
    grad: np.ndarray


def quadrature_field(mesh: Mesh, nodal: np.ndarray) -> QuadratureField:
    return QuadratureField(to_quadrature(mesh, nodal), gradient(mesh, nodal))


def pair(tensor: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    tensor(a, b) at the quadrature points, for per-triangle vectors a and b.
    """
    return np.einsum("ti,tqij,tj->tq", a, tensor, b)


def gradient_load(
    mesh: Mesh, weight: np.ndarray, tensor: np.ndarray, grad: np.ndarray
) -> np.ndarray:
    """
    Load vector of phi -> int weight tensor(grad, grad phi), for a weight
    at the quadrature points and a per-triangle gradient.
    """
    flux = weight[..., None] * np.einsum("tqij,ti->tqj", tensor, grad)
    return flux_load_vector(mesh, flux)


def contract(load: np.ndarray, field: np.ndarray) -> float:
    """
    Evaluates a form by pairing its load vector with a nodal field in the
    test-function slot.
    """
    value = load @ field
    return float(value.real) if np.iscomplexobj(value) else float(value)
