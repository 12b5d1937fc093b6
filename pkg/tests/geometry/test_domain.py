import numpy as np
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises
from pytest import mark

from fermi_forge.geometry import Domain, annulus, unit_disk


@mark.parametrize(
    "kind, inner_radius",
    [
        ("square", None),  # unknown kind
        ("annulus", None),  # missing radius
        ("annulus", 1.0),  # empty annulus
        ("annulus", -0.5),  # negative radius
        ("unit_disk", 0.5),  # disk with hole
    ],
)
def test_invalid_domains_raise(kind, inner_radius):
    with assert_raises(ValueError):
        Domain(kind, inner_radius)


def test_boundary_components():
    (outer,) = unit_disk().boundary_components
    assert_equal((outer.radius, outer.orientation), (1.0, 1))

    outer, inner = annulus(0.25).boundary_components
    assert_equal((outer.radius, outer.orientation), (1.0, 1))
    assert_equal((inner.radius, inner.orientation), (0.25, -1))


def test_area():
    assert_allclose(unit_disk().area, np.pi)
    assert_allclose(annulus(0.5).area, 0.75 * np.pi)


def test_contains_with_margin():
    domain = annulus(0.5)
    points = np.array([[0.0, 0.0], [0.75, 0.0], [0.0, 0.95], [0.0, 1.1]])

    assert_equal(domain.contains(points), [False, True, True, False])
    inside = domain.contains(points, margin=0.1)
    assert_equal(inside, [False, True, False, False])
    assert_allclose(domain.distance_to_boundary(points[1:2]), 0.25)
    assert_(unit_disk().contains(points[:1]).all())
