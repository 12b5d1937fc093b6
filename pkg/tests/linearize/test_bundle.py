from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.geometry import build_mesh, make_family, unit_disk
from fermi_forge.linearize import linearization_bundle, solve_first_lin
from fermi_forge.pde_core import BoundaryFunction


def _data(mesh):
    return [
        BoundaryFunction.trigonometric(mesh.domain, 1),
        BoundaryFunction.trigonometric(mesh.domain, 2, kind="sin"),
        BoundaryFunction.trigonometric(mesh.domain, 0),
    ]


def test_second_order_bundle():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    data = _data(mesh)
    bundle = linearization_bundle(family, mesh, data)

    assert_equal(sorted(bundle.first), [0, 1, 2])
    assert_equal(len(bundle.second), 6)
    assert_equal(len(bundle.third), 0)

    assert_(bundle.w(2, 0) is bundle.w(0, 2))
    assert_allclose(bundle.v(1), solve_first_lin(family, mesh, data[1]))


def test_third_order_bundle_with_selected_triples():
    family = make_family("shear")
    mesh = build_mesh(unit_disk(), 0)
    bundle = linearization_bundle(
        family, mesh, _data(mesh), order=3, triples=[(2, 1, 0), (0, 0, 1)]
    )

    assert_equal(sorted(bundle.third), [(0, 0, 1), (0, 1, 2)])
    assert_(bundle.w(1, 2, 0) is bundle.w(0, 1, 2))


def test_first_order_bundle():
    mesh = build_mesh(unit_disk(), 0)
    family = make_family("exponential")
    bundle = linearization_bundle(family, mesh, _data(mesh), order=1)

    assert_equal(len(bundle.first), 3)
    assert_equal(len(bundle.second), 0)


def test_invalid_arguments_raise():
    mesh = build_mesh(unit_disk(), 0)
    family = make_family("exponential")

    with assert_raises(ValueError):
        linearization_bundle(family, mesh, _data(mesh), order=4)

    bundle = linearization_bundle(family, mesh, _data(mesh))
    with assert_raises(ValueError):
        bundle.w(0)
