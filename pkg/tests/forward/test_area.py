import numpy as np
from numpy.testing import assert_allclose, assert_raises

from fermi_forge.exceptions import RangeViolationError
from fermi_forge.forward import area
from fermi_forge.geometry import (
    EuclideanFamily,
    NumericMetricFamily,
    build_mesh,
    make_family,
    unit_disk,
)


def test_flat_disk():
    mesh = build_mesh(unit_disk(), 3)
    flat = area(EuclideanFamily(), mesh, np.zeros(mesh.n_nodes))

    assert_allclose(flat, mesh.areas.sum())
    assert_allclose(flat, np.pi, rtol=2e-3)


def test_tilted_plane():
    mesh = build_mesh(unit_disk(), 2)
    u = 0.3 * mesh.nodes[:, 0]
    tilted = area(EuclideanFamily(), mesh, u)

    assert_allclose(tilted, np.sqrt(1 + 0.3**2) * mesh.areas.sum())


def test_weighted_area_at_zero():
    """
    With g(x, 0) = (1 + |x|^2) I the area of u = 0 is the integral of
    1 + |x|^2 over the disk, 3 pi / 2.
    """

    def metric(points, s):
        scale = (1 + np.sum(points**2, axis=1)) * np.exp(s)
        return scale[:, None, None] * np.eye(2)

    mesh = build_mesh(unit_disk(), 3)
    value = area(NumericMetricFamily(metric), mesh, np.zeros(mesh.n_nodes))
    assert_allclose(value, 1.5 * np.pi, rtol=5e-3)


def test_minimal_family_at_zero_has_flat_area():
    mesh = build_mesh(unit_disk(), 1)
    zero = np.zeros(mesh.n_nodes)

    for name in ("exponential", "conformal", "shear"):
        value = area(make_family(name), mesh, zero)
        assert_allclose(value, mesh.areas.sum())


def test_out_of_range_raises():
    mesh = build_mesh(unit_disk(), 0)

    with assert_raises(RangeViolationError):
        area(EuclideanFamily(), mesh, np.full(mesh.n_nodes, 1.0))
