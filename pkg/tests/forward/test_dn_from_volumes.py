import numpy as np
from numpy.testing import assert_, assert_allclose

from fermi_forge.forward import dn_from_volumes
from fermi_forge.geometry import (
    EuclideanFamily,
    build_mesh,
    make_family,
    unit_disk,
)
from fermi_forge.pde_core import BoundaryFunction


def test_volumes_at_zero_data():
    mesh = build_mesh(unit_disk(), 1)
    w = BoundaryFunction.trigonometric(mesh.domain, 1, kind="sin", n_modes=4)
    check = dn_from_volumes(make_family("exponential"), mesh, None, w)

    assert_allclose(check.boundary_integral, 0.0, atol=1e-14)
    assert_allclose(check.finite_difference, 0.0, atol=1e-5)


def test_volumes_match_dn_pairing():
    mesh = build_mesh(unit_disk(), 2)
    f = BoundaryFunction.trigonometric(mesh.domain, 1, 0.05, n_modes=4)
    w = BoundaryFunction.trigonometric(mesh.domain, 1, kind="sin", n_modes=4)
    check = dn_from_volumes(make_family("exponential"), mesh, f, w)

    assert_(check.difference < 1e-5)


def test_volumes_euclidean_closed_form():
    """
    For the linear graph u = 0.1 x and w = cos(theta), the pairing is
    0.1 (1.01)^{-1/2} times the integral of cos^2 over the circle.
    """
    mesh = build_mesh(unit_disk(), 3)
    f = BoundaryFunction.trigonometric(mesh.domain, 1, 0.1, n_modes=4)
    w = BoundaryFunction.trigonometric(mesh.domain, 1, n_modes=4)
    check = dn_from_volumes(EuclideanFamily(), mesh, f, w)

    expected = 0.1 / np.sqrt(1.01) * np.pi
    assert_allclose(check.boundary_integral, expected, rtol=1e-2)
    assert_allclose(check.finite_difference, expected, rtol=1e-2)
