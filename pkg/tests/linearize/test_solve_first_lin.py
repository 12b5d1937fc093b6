import numpy as np
from numpy.testing import assert_, assert_allclose, assert_raises
from scipy.linalg import eigh

from fermi_forge.exceptions import EigenvalueCollisionError
from fermi_forge.geometry import (
    EuclideanFamily,
    ExponentialFamily,
    MetricFamily,
    build_mesh,
    unit_disk,
)
from fermi_forge.linearize import (
    first_linearized_operator,
    graph_derivative,
    solve_first_lin,
)
from fermi_forge.pde_core import (
    BoundaryFunction,
    assemble_operator,
    solve_dirichlet,
)


class GaussianScaling(MetricFamily):
    """
    g = exp(c s^2) I, a minimal family with h1 = 4 c and k1 = 0.
    """

    closed_form = True

    def __init__(self, c: float):
        self.c = c

    def evaluate(self, points, s):
        return self.s_derivatives(points, s, order=0)[0]

    def s_derivatives(self, points, s=0.0, order=4):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        c = self.c
        value = np.exp(c * s**2)
        factors = [
            np.ones_like(s),
            2 * c * s,
            2 * c + 4 * c**2 * s**2,
            12 * c**2 * s + 8 * c**3 * s**3,
            12 * c**2 + 48 * c**3 * s**2 + 16 * c**4 * s**4,
        ]

        derivs = np.zeros((order + 1, len(points), 2, 2))
        for n in range(order + 1):
            derivs[n] = (factors[n] * value)[:, None, None] * np.eye(2)

        return derivs


def test_linear_data_on_euclidean_family():
    mesh = build_mesh(unit_disk(), 2)
    f = BoundaryFunction.trigonometric(mesh.domain, 1)
    v = solve_first_lin(EuclideanFamily(), mesh, f)

    assert_allclose(v, mesh.nodes[:, 0], atol=1e-12)


def test_exponential_family_has_constant_potential():
    """
    With a constant profile, g(x, 0) = I and h1 = 4 beta, so the first
    linearized equation is Delta v + 2 beta v = 0.
    """
    family = ExponentialFamily(beta=0.25)
    mesh = build_mesh(unit_disk(), 2)
    f = BoundaryFunction.from_mode(mesh.domain, 1)

    v = solve_first_lin(family, mesh, f)
    potential = np.full(mesh.n_nodes, 2 * 0.25)
    expected = solve_dirichlet(assemble_operator(mesh, q=potential), f)

    assert_allclose(v, expected, atol=1e-12)


def test_matches_derivative_of_nonlinear_solver():
    family = ExponentialFamily()
    mesh = build_mesh(unit_disk(), 1)
    f = BoundaryFunction.trigonometric(mesh.domain, 2, kind="sin")

    v = solve_first_lin(family, mesh, f)
    fd = graph_derivative(family, mesh, [f])

    error = np.linalg.norm(v - fd) / np.linalg.norm(v)
    assert_(error < 1e-3, msg=f"relative error {error:.2e}")


def test_reuses_given_operator():
    family = ExponentialFamily()
    mesh = build_mesh(unit_disk(), 1)
    op = first_linearized_operator(family, mesh)
    f = BoundaryFunction.trigonometric(mesh.domain, 3)

    assert_allclose(
        solve_first_lin(family, mesh, f, op),
        solve_first_lin(family, mesh, f),
    )


def test_eigenvalue_collision_raises():
    """
    Choosing h1 / 2 = 2 c as minus the first discrete Dirichlet eigenvalue
    makes 0 an eigenvalue of the first linearized operator.
    """
    mesh = build_mesh(unit_disk(), 0)
    interior = np.ix_(mesh.interior_nodes, mesh.interior_nodes)
    ones = np.ones(mesh.n_nodes)

    stiffness = assemble_operator(mesh).matrix.toarray()[interior]
    mass = assemble_operator(mesh, q=ones).mass.toarray()[interior]
    eigvals = eigh(stiffness, mass, eigvals_only=True)

    family = GaussianScaling(-eigvals[0] / 2)
    f = BoundaryFunction.trigonometric(mesh.domain, 1)

    with assert_raises(EigenvalueCollisionError):
        solve_first_lin(family, mesh, f)
