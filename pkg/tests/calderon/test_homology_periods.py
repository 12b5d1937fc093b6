import numpy as np
import pytest
from numpy.testing import assert_, assert_allclose, assert_raises

from fermi_forge.calderon import (
    harmonic_extension,
    homology_periods,
    log_trace,
    loop_ring,
    project_to_conjugable,
)
from fermi_forge.geometry import annulus, build_mesh, unit_disk
from fermi_forge.pde_core import BoundaryFunction

N_MODES = 16


@pytest.fixture(scope="module")
def mesh():
    return build_mesh(annulus(0.5), 3)


def _x(x, y):
    return x


def _re_z(mesh):
    return BoundaryFunction.from_callable(mesh.domain, _x, N_MODES)


def test_linear_function_has_no_period(mesh):
    u = harmonic_extension(mesh, _re_z(mesh))
    periods = homology_periods(mesh, u, loops=(0.6, 0.75, 0.9))

    assert_allclose(periods, 0, atol=1e-10)


def test_log_radius_has_period_two_pi(mesh):
    u = harmonic_extension(mesh, log_trace(mesh, N_MODES))
    (period,) = homology_periods(mesh, u)

    assert_allclose(period, 2 * np.pi, rtol=2e-2)


def test_projection_removes_the_period(mesh):
    f = log_trace(mesh, N_MODES) + _re_z(mesh)
    projected = project_to_conjugable(mesh, f)

    u = harmonic_extension(mesh, projected)
    assert_allclose(homology_periods(mesh, u), 0, atol=1e-10)

    # The projection keeps the period-free part.
    expected = _re_z(mesh).coefficients
    assert_allclose(projected.coefficients, expected, atol=1e-2)


def test_projection_is_identity_on_period_free_traces(mesh):
    f = _re_z(mesh)
    projected = project_to_conjugable(mesh, f)

    assert_allclose(projected.coefficients, f.coefficients, atol=1e-10)


def test_projection_is_idempotent(mesh):
    f = log_trace(mesh, N_MODES) * 0.7 + _re_z(mesh) * 2
    once = project_to_conjugable(mesh, f)
    twice = project_to_conjugable(mesh, once)

    assert_allclose(twice.coefficients, once.coefficients, atol=1e-10)


def test_loop_ring_is_interior(mesh):
    ring = loop_ring(mesh, 0.75)
    radii = np.hypot(*mesh.nodes[ring].T)
    assert_allclose(radii, 0.75, atol=1e-12)

    for radius in (0.45, 0.5, 1.0):
        with assert_raises(ValueError):
            loop_ring(mesh, radius)


def test_disk_has_no_periods():
    mesh = build_mesh(unit_disk(), 2)
    u = np.zeros(mesh.n_nodes)

    with assert_raises(ValueError):
        homology_periods(mesh, u)

    assert_(mesh.domain.kind == "unit_disk")
