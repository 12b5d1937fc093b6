from typing import Optional, Sequence

import numpy as np

from fermi_forge.geometry import gaussian

from .dbar_psi_inv import dbar_psi_inv, dbar_psi_star_inv
from .grid import CGOGrid


def conjugation_potential(q: np.ndarray) -> np.ndarray:
    """
    The potential entering the first-order system of (Delta + q) v = 0 with
    Delta = -4 d dbar, i.e., -q / 4.
    """
    return -np.asarray(q) / 4


def apply_th(
    grid: CGOGrid, f: np.ndarray, psi: np.ndarray, q: np.ndarray, h: float
) -> np.ndarray:
    """
    Applies T_h = -dbar_psi^{*-1} q' dbar_psi^{-1} with q' = -q / 4, the
    operator of the Neumann series for the CGO remainder.

    Parameters
    ----------
    grid
        The grid.
    f
        The field.
    psi
        Values of the oscillating phase psi.
    q
        The potential of Delta + q, as a grid field.
    h
        Semiclassical parameter.
    """
    qhat = conjugation_potential(q)
    inner = dbar_psi_inv(grid, f, psi, h)
    return -dbar_psi_star_inv(grid, qhat * inner, psi, h)


def probe_fields(grid: CGOGrid) -> list[np.ndarray]:
    """
    Smooth probe fields for operator-norm estimates: 1, z, conj(z) and an
    off-centre Gaussian.
    """
    z = grid.z
    bump = gaussian(grid.points, center=0.3 + 0.2j, width=0.3)
    return [np.ones_like(z), z, np.conj(z), bump.astype(complex)]


def th_norm(
    grid: CGOGrid,
    psi: np.ndarray,
    q: np.ndarray,
    h: float,
    probes: Optional[Sequence[np.ndarray]] = None,
) -> float:
    """
    Operator-norm proxy of T_h on L^2 of the unit disk: the largest ratio
    |T_h f| / |f| over the probe fields.
    """
    if probes is None:
        probes = probe_fields(grid)

    ratios = [
        grid.norm(apply_th(grid, probe, psi, q, h)) / grid.norm(probe)
        for probe in probes
    ]
    return max(ratios)
