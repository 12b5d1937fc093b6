import numpy as np
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.exceptions import DegenerateMeshError
from fermi_forge.geometry import Mesh, annulus, build_mesh, unit_disk


def test_degenerate_triangle_raises():
    nodes = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    triangles = np.array([[0, 1, 2]])

    with assert_raises(DegenerateMeshError):
        Mesh(nodes, triangles, (np.array([0, 1, 2]),), 0, unit_disk())


def test_basis_gradients_reproduce_linear_functions():
    """
    The gradients of the nodal basis functions sum to zero and reproduce the
    gradient of any linear function exactly.
    """
    mesh = build_mesh(unit_disk(), 1)
    grads = mesh.basis_gradients

    assert_allclose(grads.sum(axis=1), 0, atol=1e-12)

    values = 2 * mesh.nodes[:, 0] - 3 * mesh.nodes[:, 1] + 1
    grad = np.einsum("tai,ta->ti", grads, values[mesh.triangles])
    assert_allclose(grad, np.broadcast_to([2.0, -3.0], grad.shape))


def test_quadrature_points_are_edge_midpoints():
    mesh = build_mesh(unit_disk(), 0)
    tri = mesh.triangles[5]
    midpoints = mesh.quadrature_points[5]

    assert_allclose(midpoints[0], mesh.nodes[tri[[0, 1]]].mean(axis=0))
    assert_allclose(midpoints[1], mesh.nodes[tri[[1, 2]]].mean(axis=0))
    assert_allclose(midpoints[2], mesh.nodes[tri[[2, 0]]].mean(axis=0))


def test_interior_and_boundary_partition_nodes():
    mesh = build_mesh(annulus(0.5), 1)
    nodes = np.concatenate([mesh.interior_nodes, mesh.all_boundary_nodes])
    assert_equal(np.sort(nodes), np.arange(mesh.n_nodes))


def test_boundary_edges_have_outward_normals():
    """
    Outward normals point away from the origin on the outer circle and
    towards it on the inner circle of the annulus.
    """
    mesh = build_mesh(annulus(0.5), 1)
    outer, inner = mesh.boundary_edges

    radial = np.einsum("ei,ei->e", outer.normals, outer.midpoints)
    assert_(np.all(radial > 0))

    radial = np.einsum("ei,ei->e", inner.normals, inner.midpoints)
    assert_(np.all(radial < 0))

    assert_allclose(np.hypot(*outer.normals.T), 1.0)
    assert_allclose(outer.lengths.sum(), 2 * np.pi, rtol=5e-3)


def test_boundary_edge_triangles_contain_the_edge():
    mesh = build_mesh(unit_disk(), 1)
    (edges,) = mesh.boundary_edges

    for (i, j), tri in zip(edges.nodes, edges.triangles):
        assert_(i in mesh.triangles[tri] and j in mesh.triangles[tri])
