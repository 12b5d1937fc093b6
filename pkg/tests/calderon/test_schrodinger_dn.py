import numpy as np
import pytest
from numpy.testing import assert_, assert_allclose, assert_raises

from fermi_forge.calderon import (
    diffeomorphism_defect,
    gauge_defect,
    schrodinger_dn,
    swirl,
)
from fermi_forge.cgo import decay_fit
from fermi_forge.exceptions import NonSPDMetricError
from fermi_forge.geometry import ConformalFamily, build_mesh, unit_disk


def gauge_factor(points):
    radius2 = np.sum(points**2, axis=-1)
    return 1 + 0.3 * (1 - radius2) ** 2


def test_flat_disk_is_fourier_diagonal():
    mesh = build_mesh(unit_disk(), 3)
    dn = schrodinger_dn(mesh, n_modes=4)
    modes = np.arange(-4, 5)

    assert_allclose(np.diag(dn.matrix).real, np.abs(modes), atol=0.1)
    assert_(dn.metadata["equation"] == "schrodinger")


def test_constant_potential_gives_symmetric_map():
    mesh = build_mesh(unit_disk(), 2)
    dn = schrodinger_dn(mesh, q=2.0, n_modes=6)
    assert_(dn.hermitian_defect() < 1e-10)


def test_metric_family_is_accepted():
    mesh = build_mesh(unit_disk(), 2)
    family = ConformalFamily(beta=0.3, gamma=0.1, profile="bump")

    # The family is Euclidean at s = 0.
    dn = schrodinger_dn(mesh, family, n_modes=4)
    flat = schrodinger_dn(mesh, n_modes=4)
    assert_allclose(dn.matrix, flat.matrix, atol=1e-12)


def test_non_spd_metric_raises():
    mesh = build_mesh(unit_disk(), 1)

    def indefinite(points):
        shape = points.shape[:-1] + (2, 2)
        return np.broadcast_to(np.diag([1.0, -1.0]), shape)

    with assert_raises(NonSPDMetricError):
        schrodinger_dn(mesh, indefinite)


@pytest.mark.parametrize("level", [1, 2])
def test_gauge_pairs_agree(level):
    """
    (I, q) and (c I, q / c) have equal DN maps when c = 1 on the boundary.
    With coefficients sampled at the quadrature points, d A and d q are
    unchanged by the gauge for any base metric, so the discrete maps agree
    to rounding.
    """
    mesh = build_mesh(unit_disk(), level)
    assert_(gauge_defect(mesh, gauge_factor, 1.5, 6) < 1e-10)


def test_gauge_factor_must_be_one_on_boundary():
    mesh = build_mesh(unit_disk(), 1)

    with assert_raises(ValueError):
        gauge_defect(mesh, lambda points: np.full(points.shape[:-1], 2.0))



def _potential(points):
    return 1.5 + points[..., 0]


def test_swirl_jacobian_matches_differences():
    rng = np.random.default_rng(3)
    points = 0.6 * rng.uniform(-1, 1, size=(10, 2))
    _, jacobian = swirl(points)

    step = 1e-6
    for axis in range(2):
        offset = np.zeros(2)
        offset[axis] = step
        plus, _ = swirl(points + offset)
        minus, _ = swirl(points - offset)
        column = (plus - minus) / (2 * step)
        assert_allclose(jacobian[:, :, axis], column, atol=1e-8)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_diffeomorphism_gauge_converges_under_refinement():
    """
    The pulled-back metric is not conformally flat, so the two discrete
    maps differ, and their distance is a discretization error.
    """
    defects, sizes = [], []
    for level in (1, 2, 3):
        mesh = build_mesh(unit_disk(), level)
        defect = diffeomorphism_defect(mesh, swirl, None, _potential, 4)
        defects.append(defect)
        sizes.append(mesh.max_edge_length)

    assert_(defects[-1] > 1e-12)
    assert_(defects[-1] < defects[0])

    fit = decay_fit(defects, sizes)
    assert_(fit.slope >= 1.0, msg=f"rate {fit.slope:.2f}")


def test_diffeomorphism_must_fix_boundary():
    mesh = build_mesh(unit_disk(), 1)

    def shift(points):
        jacobian = np.broadcast_to(np.eye(2), points.shape + (2,))
        return points + 0.1, jacobian

    with assert_raises(ValueError):
        diffeomorphism_defect(mesh, shift)
