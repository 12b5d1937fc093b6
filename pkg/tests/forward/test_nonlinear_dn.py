import numpy as np
from numpy.testing import assert_, assert_allclose

from fermi_forge.forward import msq_jacobian, nonlinear_dn
from fermi_forge.geometry import EuclideanFamily, build_mesh, make_family
from fermi_forge.geometry import unit_disk
from fermi_forge.pde_core import BoundaryFunction, dn_matrix


def test_zero_data_has_zero_flux():
    mesh = build_mesh(unit_disk(), 1)
    f = BoundaryFunction.zeros(mesh.domain, 4)
    image = nonlinear_dn(make_family("exponential"), mesh, f, n_modes=4)

    assert_allclose(image.coefficients, 0.0, atol=1e-14)


def test_linear_graph_on_euclidean_family():
    """
    For u = 0.1 x the conormal derivative is 0.1 cos(theta).
    """
    mesh = build_mesh(unit_disk(), 3)
    f = BoundaryFunction.trigonometric(mesh.domain, 1, 0.1, n_modes=4)
    image = nonlinear_dn(EuclideanFamily(), mesh, f, n_modes=4)

    expected = BoundaryFunction.trigonometric(mesh.domain, 1, 0.1, n_modes=4)
    assert_allclose(image.coefficients, expected.coefficients, atol=1e-3)


def test_frechet_derivative_at_zero_is_linearized_dn_map():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 2)
    zero = np.zeros(mesh.n_nodes)
    f = BoundaryFunction.trigonometric(mesh.domain, 2, 1.0, n_modes=4)
    eps = 1e-3

    plus = nonlinear_dn(family, mesh, eps * f, n_modes=4)
    minus = nonlinear_dn(family, mesh, -eps * f, n_modes=4)
    derivative = (plus - minus) / (2 * eps)

    linear = dn_matrix(msq_jacobian(family, mesh, zero), n_modes=4).apply(f)
    error = (derivative - linear).norm()
    assert_(error <= 1e-4 * linear.norm(), msg=f"error {error:.2e}")
