import numpy as np
import pytest
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.calderon import mesh_correctors, wkb_ansatz, wkb_correctors
from fermi_forge.cgo import CGOGrid, Phase
from fermi_forge.geometry import (
    boundary_flat_cutoff,
    build_mesh,
    gaussian,
    unit_disk,
)

H_LIST = np.geomspace(0.05, 0.5, 6)


def _potential(points):
    return gaussian(points, center=0.1 + 0.1j, width=0.3)


@pytest.fixture(scope="module")
def grid():
    return CGOGrid(size=128)


def test_zero_potential_needs_no_correctors(grid):
    result = wkb_ansatz(Phase((0, 1)), 0.0, 2, H_LIST, grid)

    assert_equal(result.n_terms, 2)
    for corrector in result.correctors:
        assert_allclose(corrector, 0)

    assert_allclose(result.residuals, 0)
    assert_(result.fit is None)
    assert_(np.isnan(result.slope))


def test_no_correctors_leave_the_potential(grid):
    """
    Without correctors the residual is q a, independent of h.
    """
    result = wkb_ansatz(Phase((0, 1)), _potential, 0, H_LIST, grid)

    assert_equal(result.n_terms, 0)
    assert_allclose(result.residuals, result.residuals[0])
    assert_allclose(result.slope, 0, atol=1e-8)


@pytest.mark.parametrize("n_terms", [1, 2])
def test_residual_decays_with_number_of_terms(grid, n_terms):
    result = wkb_ansatz(Phase((0, 1)), _potential, n_terms, H_LIST, grid)

    assert_equal(len(result.sources), n_terms)
    assert_(result.slope > n_terms - 0.2, msg=f"slope {result.slope:.3f}")


def test_residual_decays_for_nonlinear_phase(grid):
    phase = Phase((0, 1, 0.2j))
    result = wkb_ansatz(phase, _potential, 1, H_LIST, grid)

    assert_(result.slope > 0.8, msg=f"slope {result.slope:.3f}")


def test_invalid_input_raises(grid):
    with assert_raises(ValueError):
        wkb_ansatz(Phase((0, 1)), 1.0, n_terms=4, grid=grid)

    with assert_raises(ValueError):
        wkb_ansatz(Phase((0, 1), antiholomorphic=True), 1.0, grid=grid)

    # (z - c)^2 has a critical point at the grid point c.
    center = grid.z[64, 70]
    phase = Phase((center**2, -2 * center, 1))
    with assert_raises(ValueError):
        wkb_ansatz(phase, 1.0, grid=grid)


@pytest.fixture(scope="module")
def mesh():
    return build_mesh(unit_disk(), 4)


def _interior(mesh, radius=0.8):
    return np.linalg.norm(mesh.nodes, axis=1) <= radius


def test_green_corrector_for_constant_potential(mesh):
    """
    With Phi = z, a = 1 and q = 4 the first source is 1, and -4 d G 1 is
    -d(1 - z zbar) = zbar.
    """
    ones = np.ones(mesh.n_nodes)
    correctors, sources = mesh_correctors(
        mesh, Phase((0, 1)), ones, 4 * ones, 1
    )

    inside = _interior(mesh)
    z = mesh.nodes[:, 0] + 1j * mesh.nodes[:, 1]
    assert_allclose(sources[0], 1.0)
    assert_allclose(correctors[0][inside], np.conj(z[inside]), atol=2e-2)


def test_green_correctors_vanish_without_potential(mesh):
    zeros = np.zeros(mesh.n_nodes)
    correctors, _ = mesh_correctors(
        mesh, Phase((0, 1, 0.2j)), np.ones(mesh.n_nodes), zeros, 2
    )

    for corrector in correctors:
        assert_allclose(corrector, 0)


def test_green_and_cauchy_correctors_agree_for_radial_source(grid, mesh):
    """
    Both invert dbar, so they differ by a function holomorphic in the disk,
    which vanishes for a radial source supported in the disk.
    """
    phase = Phase((0, 1))
    on_grid, _ = wkb_correctors(
        grid, phase, np.ones(grid.z.shape), grid.field(boundary_flat_cutoff), 1
    )
    on_mesh, _ = mesh_correctors(
        mesh,
        phase,
        np.ones(mesh.n_nodes),
        boundary_flat_cutoff(mesh.nodes),
        1,
    )

    inside = _interior(mesh)
    sampled = grid.sample(on_grid[0], mesh.nodes[inside])
    scale = np.abs(sampled).max()

    assert_(scale > 1e-2)
    assert_allclose(on_mesh[0][inside], sampled, atol=5e-2 * scale)
