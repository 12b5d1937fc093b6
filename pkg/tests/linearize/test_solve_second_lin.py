import numpy as np
from numpy.testing import assert_, assert_allclose
from pytest import mark

from fermi_forge.geometry import (
    EuclideanFamily,
    build_mesh,
    make_family,
    unit_disk,
)
from fermi_forge.linearize import (
    graph_derivative,
    solve_first_lin,
    solve_second_lin,
)
from fermi_forge.pde_core import BoundaryFunction


def _first_linearizations(family, mesh):
    f_j = BoundaryFunction.trigonometric(mesh.domain, 1)
    f_k = BoundaryFunction.trigonometric(mesh.domain, 2, kind="sin")
    v_j = solve_first_lin(family, mesh, f_j)
    v_k = solve_first_lin(family, mesh, f_k)
    return (f_j, f_k), (v_j, v_k)


def test_vanishes_on_euclidean_family():
    family = EuclideanFamily()
    mesh = build_mesh(unit_disk(), 1)
    _, (v_j, v_k) = _first_linearizations(family, mesh)

    assert_allclose(solve_second_lin(family, mesh, v_j, v_k), 0.0)


def test_symmetric_in_its_arguments():
    family = make_family("shear")
    mesh = build_mesh(unit_disk(), 1)
    _, (v_j, v_k) = _first_linearizations(family, mesh)

    w_jk = solve_second_lin(family, mesh, v_j, v_k)
    w_kj = solve_second_lin(family, mesh, v_k, v_j)
    assert_allclose(w_jk, w_kj, rtol=1e-12, atol=1e-15)


def test_vanishes_on_boundary():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    _, (v_j, v_k) = _first_linearizations(family, mesh)

    w = solve_second_lin(family, mesh, v_j, v_k)
    assert_allclose(w[mesh.all_boundary_nodes], 0.0)
    assert_(np.abs(w).max() > 1e-3)


@mark.parametrize("name", ["exponential", "shear"])
def test_matches_mixed_derivative_of_nonlinear_solver(name: str):
    """
    The second linearization is the exact mixed derivative of the discrete
    solution map, so the 4-point stencil agrees up to O(eps^2).
    """
    family = make_family(name)
    mesh = build_mesh(unit_disk(), 1)
    data, (v_j, v_k) = _first_linearizations(family, mesh)

    w = solve_second_lin(family, mesh, v_j, v_k)
    fd = graph_derivative(family, mesh, data)

    error = np.linalg.norm(w - fd) / np.linalg.norm(w)
    assert_(error < 1e-3, msg=f"relative error {error:.2e}")
