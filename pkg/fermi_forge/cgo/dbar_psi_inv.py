import numpy as np

from fermi_forge.exceptions import UnderResolvedOscillationError

from .cauchy_transform import cauchy_transform, conj_cauchy_transform
from .grid import CGOGrid

POINTS_PER_WAVELENGTH = 10


def max_phase_gradient(grid: CGOGrid, psi: np.ndarray) -> float:
    """
    Largest |grad psi| on the support of the grid cutoff.
    """
    psi = np.real(psi)
    grad = np.hypot(grid.dx(psi), grid.dy(psi))
    return float(np.max(grad[grid.support], initial=0))


def is_resolved(
    grid: CGOGrid, psi: np.ndarray, h: float, factor: float = 2.0
) -> bool:
    """
    Whether the grid has at least POINTS_PER_WAVELENGTH points per
    wavelength of exp(i factor psi / h).
    """
    if h <= 0:
        raise ValueError(f"Semiclassical parameter must be positive, got {h}.")

    slope = factor * max_phase_gradient(grid, psi) / h
    if slope == 0:
        return True

    wavelength = 2 * np.pi / slope
    return grid.spacing <= wavelength / POINTS_PER_WAVELENGTH


def check_resolution(
    grid: CGOGrid, psi: np.ndarray, h: float, factor: float = 2.0
):
    """
    Raises UnderResolvedOscillationError unless the grid resolves
    exp(i factor psi / h).
    """
    if not is_resolved(grid, psi, h, factor):
        slope = factor * max_phase_gradient(grid, psi)
        h_min = POINTS_PER_WAVELENGTH * grid.spacing * slope / (2 * np.pi)
        msg = (
            f"Under-resolved oscillation: h = {h:.4g} needs h >= "
            f"{h_min:.4g} on a grid of size {grid.size}."
        )
        raise UnderResolvedOscillationError(msg)


def dbar_psi_inv(
    grid: CGOGrid, f: np.ndarray, psi: np.ndarray, h: float
) -> np.ndarray:
    """
    Conjugated right inverse of dbar,

        dbar_psi^{-1} f = dbar^{-1}(exp(-2i psi / h) E f),

    where E multiplies by the grid cutoff. The result is kept on the whole
    grid; restriction to the unit disk happens when norms are taken.

    Raises
    ------
    UnderResolvedOscillationError
        When exp(2i psi / h) is not resolved by the grid.
    """
    check_resolution(grid, psi, h)
    oscillation = np.exp(-2j * np.real(psi) / h)
    return cauchy_transform(grid, oscillation * grid.extend(f))


def dbar_psi_star_inv(
    grid: CGOGrid, f: np.ndarray, psi: np.ndarray, h: float
) -> np.ndarray:
    """
    Conjugated right inverse of the adjoint dbar^* = d,

        dbar_psi^{*-1} f = d^{-1}(exp(2i psi / h) E f).
    """
    check_resolution(grid, psi, h)
    oscillation = np.exp(2j * np.real(psi) / h)
    return conj_cauchy_transform(grid, oscillation * grid.extend(f))


def dbar_psi_inv_split(
    grid: CGOGrid,
    f: np.ndarray,
    psi: np.ndarray,
    dbar_psi: np.ndarray,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Splits dbar_psi^{-1} f by one integration by parts, for a phase psi
    without critical points on the cutoff support:

        dbar_psi^{-1} f = (ih / 2) exp(-2i psi / h) E f / dbar psi
                          - (ih / 2) dbar^{-1}(exp(-2i psi / h)
                                               dbar(E f / dbar psi)).

    Both terms are O(h) for smooth f.

    Parameters
    ----------
    grid
        The grid.
    f
        The field.
    psi
        The phase values.
    dbar_psi
        The exact antiholomorphic derivative of psi at the grid points.
    h
        Semiclassical parameter.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        The local term and the transformed term.
    """
    check_resolution(grid, psi, h)

    if np.min(np.abs(dbar_psi[grid.support])) < 1e-8:
        raise ValueError("The phase has a critical point on the support.")

    oscillation = np.exp(-2j * np.real(psi) / h)
    ratio = np.zeros_like(dbar_psi, dtype=complex)
    support = grid.support
    ratio[support] = grid.extend(f)[support] / dbar_psi[support]

    local = 0.5j * h * oscillation * ratio
    transformed = -0.5j * h * cauchy_transform(
        grid, oscillation * grid.dbar(ratio)
    )
    return local, transformed
