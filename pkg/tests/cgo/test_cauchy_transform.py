import numpy as np
from numpy.testing import assert_, assert_allclose

from fermi_forge.cgo import CGOGrid, cauchy_transform, conj_cauchy_transform
from fermi_forge.geometry import gaussian


def _radial_gaussian_transform(z, width):
    """
    Closed form of the transform of exp(-|z|^2 / 2 width^2).
    """
    r2 = np.abs(z) ** 2
    return 2 * width**2 * (1 - np.exp(-r2 / (2 * width**2))) / z


def test_matches_closed_form_for_radial_gaussian():
    grid = CGOGrid(size=256)
    width = 0.2
    omega = gaussian(grid.points, width=width)

    result = cauchy_transform(grid, omega)
    exact = _radial_gaussian_transform(grid.z, width)

    inside = grid.inside
    error = np.max(np.abs(result - exact)[inside])
    assert_(error < 2e-3 * np.max(np.abs(exact)), msg=f"error {error:.2e}")


def test_even_density_gives_odd_transform():
    grid = CGOGrid(size=64)
    omega = gaussian(grid.points, width=0.3)
    result = cauchy_transform(grid, omega)

    assert_allclose(result[::-1, ::-1], -result, atol=1e-10)


def test_right_inverse_of_dbar():
    grid = CGOGrid(size=256)
    width = 0.2
    bump = gaussian(grid.points, center=0.1 - 0.2j, width=width)
    shift = grid.z - (0.1 - 0.2j)
    dbar_bump = -shift * bump / (2 * width**2)

    result = cauchy_transform(grid, dbar_bump)
    assert_allclose(result[grid.inside], bump[grid.inside], atol=5e-3)


def test_conjugate_transform_inverts_d():
    grid = CGOGrid(size=256)
    width = 0.2
    bump = gaussian(grid.points, width=width)
    d_bump = -np.conj(grid.z) * bump / (2 * width**2)

    result = conj_cauchy_transform(grid, d_bump)
    assert_allclose(result[grid.inside], bump[grid.inside], atol=5e-3)
