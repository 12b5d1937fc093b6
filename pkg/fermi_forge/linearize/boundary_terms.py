from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import fft

from fermi_forge.geometry import Mesh, MetricFamily, evaluate_jets
from fermi_forge.pde_core import (
    BoundaryFunction,
    EllipticOperator,
    boundary_flux,
    boundary_frame,
)
from fermi_forge.pde_core.quadrature import bilinear


@dataclass(frozen=True)
class BoundaryTrace:
    """
    Values and full gradient of a nodal field at the boundary nodes.
    """

    values: np.ndarray
    grad: np.ndarray


class BoundaryQuadrature:
    """
    Trapezoidal quadrature at the boundary nodes with respect to the
    g-induced boundary measure dS_g at s = 0, where nu is the g-unit
    outward conormal.

    Gradients of solutions of the first linearized equation are recovered
    at the nodes from their boundary values and the weak form of
    ``operator``: the tangential part is a centered difference and the
    conormal part is the nodal density of the variational flux.
    """

    def __init__(
        self, family: MetricFamily, mesh: Mesh, operator: EllipticOperator
    ):
        self.mesh = mesh
        self.operator = operator
        self.frame = frame = boundary_frame(mesh)
        self.nodes = frame.nodes
        self.jets = evaluate_jets(family, mesh.nodes[frame.nodes])

        n, t = frame.normals, frame.tangents
        k = self.jets.k
        self._k_nn = bilinear(k, n, n)
        self._k_nt = bilinear(k, n, t)
        self._normal_length = np.sqrt(self._k_nn)

        # |t|_g = d |n|_k for orthonormal (n, t).
        self.weights = frame.spacing * self.jets.d * self._normal_length

    def trace(
        self,
        field: np.ndarray,
        source: Optional[np.ndarray] = None,
        correction: Optional[np.ndarray] = None,
    ) -> BoundaryTrace:
        """
        Boundary trace of a solution of ``operator(field) + source = 0``.

        Parameters
        ----------
        field
            Nodal solution.
        source
            Source functional of the interior problem, if any.
        correction
            Nodal values of d k(n, X) for a boundary vector field X, which
            is subtracted from the flux density before the conormal part
            of the gradient is recovered. Used when the source carries a
            divergence term with boundary flux d k(n, X).
        """
        frame, n, t = self.frame, self.frame.normals, self.frame.tangents
        slope = frame.tangential(field)
        flux = frame.density(boundary_flux(self.operator, field, source))

        if correction is not None:
            flux = flux - correction

        normal = (flux / self.jets.d - slope * self._k_nt) / self._k_nn
        grad = slope[:, None] * t + normal[:, None] * n
        return BoundaryTrace(np.asarray(field)[self.nodes], grad)

    def conormal(self, tensor: np.ndarray, trace: BoundaryTrace) -> np.ndarray:
        """
        g(nu, T grad field) = n . T grad field / |n|_k for a (2, 0)-tensor T
        given at the boundary nodes.
        """
        value = bilinear(tensor, self.frame.normals, trace.grad)
        return value / self._normal_length

    def normal_derivative(self, trace: BoundaryTrace) -> np.ndarray:
        return self.conormal(self.jets.k, trace)

    def metric(self, a: BoundaryTrace, b: BoundaryTrace) -> np.ndarray:
        """
        g(grad a, grad b) at the boundary nodes.
        """
        return bilinear(self.jets.k, a.grad, b.grad)

    def cross_flux(self, a: BoundaryTrace, b: BoundaryTrace) -> np.ndarray:
        """
        Boundary flux density a b1(n, grad b) + b b1(n, grad a) of the P^a b
        and P^b a terms of the second linearized source, with
        b1 = d1 k + d k1. Pass it as ``correction`` when tracing w^{ab}.
        """
        jets, normals = self.jets, self.frame.normals
        b1 = jets.d1[:, None, None] * jets.k + jets.d[:, None, None] * jets.k1
        value = a.values * bilinear(b1, normals, b.grad)
        return value + b.values * bilinear(b1, normals, a.grad)

    def normal_ratio(self, tensor: np.ndarray) -> np.ndarray:
        """
        T(n, n) / k(n, n).
        """
        normals = self.frame.normals
        return bilinear(tensor, normals, normals) / self._k_nn

    def varied_conormal(self, trace: BoundaryTrace, order: int) -> np.ndarray:
        """
        The s-derivative of order 1 or 2 at s = 0 of g_s(nu_s, grad field),
        where nu_s is the g_s-unit conormal, so g_s(nu_s, X) equals
        k_s(n, X) / |n|_{k_s}.
        """
        r1 = self.normal_ratio(self.jets.k1)
        k1_part = self.conormal(self.jets.k1, trace)
        normal = self.normal_derivative(trace)

        if order == 1:
            return k1_part - 0.5 * r1 * normal

        if order == 2:
            r2 = self.normal_ratio(self.jets.k2)
            k2_part = self.conormal(self.jets.k2, trace)
            return k2_part - r1 * k1_part + (0.75 * r1**2 - 0.5 * r2) * normal

        raise ValueError(f"Conormal variation order must be 1 or 2: {order}.")

    def integrate(self, values: np.ndarray) -> float:
        total = np.sum(self.weights * values)
        return total if np.iscomplexobj(total) else float(total)


def measure_weighted(
    family: MetricFamily, func: BoundaryFunction
) -> BoundaryFunction:
    """
    Returns func times the density of dS_g with respect to arc length,
    for g = g(x, 0), so that the arc-length pairing with the result is the
    dS_g pairing with ``func``.
    """
    n_samples = max(4 * func.n_modes + 4, 64)
    angles = 2 * np.pi * np.arange(n_samples) / n_samples
    tangents = np.stack([-np.sin(angles), np.cos(angles)], axis=1)
    rows = []

    for comp, circle in enumerate(func.domain.boundary_components):
        points = circle.radius * np.stack(
            [np.cos(angles), np.sin(angles)], axis=1
        )
        jets = evaluate_jets(family, points)
        density = np.sqrt(bilinear(jets.g, tangents, tangents))
        values = func.evaluate(comp, angles) * density
        spectrum = fft.fft(values) / n_samples
        rows.append(spectrum[func.modes % n_samples])

    return BoundaryFunction(func.domain, np.array(rows))


def second_identity_boundary(
    quadrature: BoundaryQuadrature,
    v_m: BoundaryTrace,
    v_j: BoundaryTrace,
    v_k: BoundaryTrace,
) -> dict[str, float]:
    """
    Boundary terms of the integral identity for the second linearization:

    - ``boundary``: -int v^m (v^j k1(nu, grad v^k) + v^k k1(nu, grad v^j))
      dS_g, which turns the volume terms into int f_m d_nu w^{jk} dS_g;
    - ``boundary_conormal``: int v^m (v^j N' grad v^k + v^k N' grad v^j)
      dS_g, the variation of the g_u-conormal of the DN map, with N' the
      first s-derivative of g_s(nu_s, .).
    """
    q = quadrature
    inner = v_j.values * q.conormal(q.jets.k1, v_k)
    inner = inner + v_k.values * q.conormal(q.jets.k1, v_j)

    varied = v_j.values * q.varied_conormal(v_k, 1)
    varied = varied + v_k.values * q.varied_conormal(v_j, 1)

    return {
        "boundary": -q.integrate(v_m.values * inner),
        "boundary_conormal": q.integrate(v_m.values * varied),
    }


def third_identity_boundary(
    quadrature: BoundaryQuadrature,
    v_m: BoundaryTrace,
    splits: list[tuple[BoundaryTrace, ...]],
) -> dict[str, float]:
    """
    Boundary terms of the integral identity for the third linearization,
    summed over the splittings (v^a, v^b, w^{ab}, v^c) of (j, k, l):

    - ``boundary_k2``: -int v^m v^a v^b g(nu, k2 grad v^c) dS_g;
    - ``boundary_d2``: -int v^m v^a v^b d^{-1} d2 d_nu v^c dS_g;
    - ``boundary_grad``: int v^m g(grad v^a, grad v^b) d_nu v^c dS_g;
    - ``boundary_k1_grad_w``: -int v^m v^c k1(nu, grad w^{ab}) dS_g;
    - ``boundary_conormal``: int v^m (v^c N' grad w^{ab}
      + v^a v^b N'' grad v^c) dS_g, with N' and N'' the s-derivatives of
      g_s(nu_s, .).

    The first four turn the volume terms into int f_m d_nu w^{jkl} dS_g on
    minimal families, and the last one is the variation of the conormal.
    """
    q = quadrature
    m = v_m.values
    names = ("k2", "d2", "grad", "k1_grad_w", "conormal")
    terms = {f"boundary_{name}": 0.0 for name in names}
    d2_ratio = q.jets.d2 / q.jets.d

    for v_a, v_b, w_ab, v_c in splits:
        product = m * v_a.values * v_b.values
        normal = q.normal_derivative(v_c)

        terms["boundary_k2"] -= q.integrate(
            product * q.conormal(q.jets.k2, v_c)
        )
        terms["boundary_d2"] -= q.integrate(product * d2_ratio * normal)
        terms["boundary_grad"] += q.integrate(
            m * q.metric(v_a, v_b) * normal
        )
        terms["boundary_k1_grad_w"] -= q.integrate(
            m * v_c.values * q.conormal(q.jets.k1, w_ab)
        )
        terms["boundary_conormal"] += q.integrate(
            m * v_c.values * q.varied_conormal(w_ab, 1)
            + product * q.varied_conormal(v_c, 2)
        )

    return terms
