import numpy as np
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises
from pytest import mark

from fermi_forge.exceptions import ResourceError
from fermi_forge.geometry import MAX_LEVEL, annulus, build_mesh, unit_disk


def test_disk_counts_at_level_zero():
    """
    Level zero uses four node circles around the centre with 6i nodes on
    circle i, and satisfies Euler's formula for a disk.
    """
    mesh = build_mesh(unit_disk(), 0)

    assert_equal(mesh.n_nodes, 1 + 6 * (1 + 2 + 3 + 4))
    assert_equal(mesh.n_triangles, 6 * 4**2)
    assert_equal(len(mesh.boundary_nodes), 1)
    assert_equal(len(mesh.boundary_nodes[0]), 24)

    n_boundary = len(mesh.all_boundary_nodes)
    assert_equal(mesh.n_triangles, 2 * mesh.n_nodes - n_boundary - 2)


@mark.parametrize("level", [0, 1, 2])
def test_boundary_nodes_lie_on_circles(level: int):
    mesh = build_mesh(annulus(0.5), level)
    outer, inner = mesh.boundary_nodes

    assert_allclose(np.hypot(*mesh.nodes[outer].T), 1.0, atol=1e-14)
    assert_allclose(np.hypot(*mesh.nodes[inner].T), 0.5, atol=1e-14)


def test_annulus_boundary_orientation():
    """
    The outer circle is traversed counterclockwise, the inner one clockwise.
    """
    mesh = build_mesh(annulus(0.4), 1)

    for comp, sign in enumerate((1, -1)):
        angles = np.unwrap(mesh.boundary_angles(comp))
        assert_(np.all(sign * np.diff(angles) > 0))


@mark.parametrize("domain", [unit_disk(), annulus(0.3)])
def test_triangles_are_counterclockwise(domain):
    mesh = build_mesh(domain, 2)
    assert_(np.all(mesh.signed_areas > 0))
    assert_allclose(mesh.areas.sum(), domain.area, rtol=2e-2)


def test_edge_length_halves_per_level():
    meshes = [build_mesh(unit_disk(), level) for level in range(4)]
    lengths = [mesh.max_edge_length for mesh in meshes]
    assert_allclose(np.array(lengths[1:]) / lengths[:-1], 0.5, rtol=0.05)


@mark.parametrize("domain", [unit_disk(), annulus(0.5)])
def test_mesh_quality(domain):
    """
    The stitched bands keep the triangles well shaped at every level.
    """
    for level in range(4):
        assert_(build_mesh(domain, level).min_angle > 20)


def test_level_cap_raises():
    with assert_raises(ResourceError):
        build_mesh(unit_disk(), MAX_LEVEL + 1)

    with assert_raises(ValueError):
        build_mesh(unit_disk(), -1)


def test_build_is_logged(caplog):
    with caplog.at_level("DEBUG", logger="fermi_forge.geometry.build_mesh"):
        mesh = build_mesh(unit_disk(), 0)

    expected = (
        f"Built unit_disk mesh at level 0: {mesh.n_nodes} nodes, "
        f"{mesh.n_triangles} triangles."
    )
    assert_(expected in caplog.messages)
