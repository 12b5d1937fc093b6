import numpy as np
from numpy.testing import assert_, assert_allclose, assert_raises

from fermi_forge.exceptions import DegenerateMeshError
from fermi_forge.geometry import annulus, build_mesh, unit_disk
from fermi_forge.pde_core import assemble_operator


def test_constants_are_in_the_kernel():
    """
    Without potential, the operator annihilates constants at interior rows.
    """
    mesh = build_mesh(annulus(0.5), 1)
    op = assemble_operator(mesh)
    residual = op.apply(np.ones(mesh.n_nodes))

    assert_allclose(residual[mesh.interior_nodes], 0.0, atol=1e-12)


def test_symmetric_for_random_spd_coefficients():
    mesh = build_mesh(unit_disk(), 1)
    rng = np.random.default_rng(42)

    B = rng.normal(size=(mesh.n_nodes, 2, 2))
    A = B @ B.transpose(0, 2, 1) + np.eye(2)
    d = 1 + rng.uniform(size=mesh.n_nodes)
    q = rng.normal(size=mesh.n_nodes)

    matrix = assemble_operator(mesh, A, d, q).matrix.toarray()
    assert_allclose(matrix, matrix.T, atol=1e-14 * np.abs(matrix).max())


def test_energy_of_linear_function():
    """
    For u = x, the stiffness energy equals the area of the mesh.
    """
    mesh = build_mesh(unit_disk(), 1)
    op = assemble_operator(mesh)
    u = mesh.nodes[:, 0]

    assert_allclose(u @ op.stiffness @ u, mesh.areas.sum())


def test_mass_matrix_integrates_constants():
    mesh = build_mesh(annulus(0.3), 1)
    op = assemble_operator(mesh, q=np.full(mesh.n_nodes, 2.0))
    ones = np.ones(mesh.n_nodes)

    assert_allclose(ones @ op.mass @ ones, 2 * mesh.areas.sum())


def test_weight_scales_the_operator():
    mesh = build_mesh(unit_disk(), 0)
    plain = assemble_operator(mesh).matrix.toarray()
    scaled = assemble_operator(mesh, d=np.full(mesh.n_nodes, 3.0))

    assert_allclose(scaled.matrix.toarray(), 3 * plain)


def test_quadrature_coefficients():
    mesh = build_mesh(unit_disk(), 0)
    A = np.broadcast_to(2 * np.eye(2), (mesh.n_triangles, 3, 2, 2))
    op = assemble_operator(mesh, A=A, at_quadrature=True)

    plain = assemble_operator(mesh)
    assert_allclose(op.matrix.toarray(), 2 * plain.matrix.toarray())


def test_non_positive_weight_raises():
    mesh = build_mesh(unit_disk(), 0)
    d = np.ones(mesh.n_nodes)
    d[mesh.interior_nodes[0]] = -1.0

    with assert_raises(DegenerateMeshError):
        assemble_operator(mesh, d=d)


def test_conormal_tensor_shape():
    mesh = build_mesh(unit_disk(), 0)
    op = assemble_operator(mesh)
    assert_(op.conormal_tensor.shape == (mesh.n_triangles, 2, 2))
