"""
The Cauchy transform

    (dbar^{-1} omega)(z) = 1 / pi int omega(z') / (z - z') dA(z'),

a right inverse of dbar = (d_x + i d_y) / 2, evaluated on a CGOGrid as a
discrete convolution with FFTs. Source cells within NEAR_CELLS of the target
use the exact integral of the kernel over the cell; all other cells use the
midpoint value.
"""
from functools import lru_cache

import numpy as np
from scipy import fft

from .grid import CGOGrid

NEAR_CELLS = 2


def _primitive(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    A function F with d_x d_y F = 1 / (x + i y), continuous away from the
    origin.
    """
    log_r2 = np.log(x**2 + y**2)
    real = x * np.arctan(y / x) + 0.5 * y * log_r2
    imag = y * np.arctan(x / y) + 0.5 * x * log_r2
    return real - 1j * imag


def cell_integrals(offsets: np.ndarray, spacing: float) -> np.ndarray:
    """
    Integrals of 1 / w over the square cells of side ``spacing`` centred at
    the complex offsets.
    """
    half = spacing / 2
    x, y = offsets.real, offsets.imag
    return (
        _primitive(x + half, y + half)
        - _primitive(x - half, y + half)
        - _primitive(x + half, y - half)
        + _primitive(x - half, y - half)
    )


@lru_cache(maxsize=8)
def _kernel_spectrum(size: int, spacing: float) -> np.ndarray:
    steps = np.arange(-(size - 1), size)
    m, n = np.meshgrid(steps, steps, indexing="ij")
    offsets = spacing * (m + 1j * n)

    kernel = np.zeros(offsets.shape, dtype=complex)
    far = np.maximum(np.abs(m), np.abs(n)) > NEAR_CELLS
    kernel[far] = spacing**2 / offsets[far]
    kernel[~far] = cell_integrals(offsets[~far], spacing)
    kernel /= np.pi

    spectrum = fft.fft2(kernel, s=(2 * size, 2 * size))
    spectrum.flags.writeable = False
    return spectrum


def cauchy_transform(grid: CGOGrid, omega: np.ndarray) -> np.ndarray:
    """
    Applies dbar^{-1} to a field supported in the grid square.

    Parameters
    ----------
    grid
        The grid.
    omega
        Field of grid shape. It should vanish near the edges of the square,
        e.g., after applying ``grid.extend``.

    Returns
    -------
    np.ndarray
        The transform at every grid point.
    """
    size = grid.size
    spectrum = _kernel_spectrum(size, grid.spacing)
    omega = np.asarray(omega, dtype=complex)
    padded = fft.fft2(omega, s=(2 * size, 2 * size))
    full = fft.ifft2(padded * spectrum)
    return full[size - 1 : 2 * size - 1, size - 1 : 2 * size - 1]


def conj_cauchy_transform(grid: CGOGrid, omega: np.ndarray) -> np.ndarray:
    """
    Applies d^{-1}, the right inverse of d with kernel
    1 / (pi (conj(z) - conj(z'))).
    """
    return np.conj(cauchy_transform(grid, np.conj(omega)))
