import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from fermi_forge.cgo import POINTS_PER_WAVELENGTH
from fermi_forge.exceptions import UnderResolvedOscillationError
from fermi_forge.geometry import Mesh, build_mesh, unit_disk
from fermi_forge.geometry.mesh import EDGE_MIDPOINT_BASIS

logger = logging.getLogger(__name__)

MAX_SUBDIVISION = 96
DEFAULT_LEVEL = 3
GRADIENT_STEP = 1e-6

PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OscillatoryIntegral:
    """
    Value of int exp(4i psi / h) A dV with the difference to the value on
    the next coarser subdivision as error estimate.
    """

    value: complex
    error: float
    subdivision: int
    n_points: int


@lru_cache(maxsize=16)
def _subdivision_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Barycentric coordinates and weights (relative to the triangle area) of
    the edge-midpoint rule applied to the m^2 congruent subtriangles of a
    uniform subdivision.
    """
    lattice = []
    for i in range(m):
        for j in range(m - i):
            lattice.append([(i, j), (i + 1, j), (i, j + 1)])
            if i + j < m - 1:
                lattice.append([(i + 1, j), (i + 1, j + 1), (i, j + 1)])

    corners = np.array(lattice, dtype=float) / m
    third = 1 - corners.sum(axis=-1, keepdims=True)
    # Barycentric coordinates of the subtriangle corners, shape (m^2, 3, 3).
    bary = np.concatenate([third, corners], axis=-1)
    points = np.einsum("qa,sab->sqb", EDGE_MIDPOINT_BASIS, bary)

    weights = np.full(points.shape[:2], 1 / (3 * m**2))
    points.flags.writeable = False
    weights.flags.writeable = False
    return points.reshape(-1, 3), weights.ravel()


def _max_gradient(psi: PointFunction, points: np.ndarray) -> float:
    step = GRADIENT_STEP
    dx = psi(points + [step, 0]) - psi(points - [step, 0])
    dy = psi(points + [0, step]) - psi(points - [0, step])
    return float(np.max(np.hypot(dx, dy)) / (2 * step))


def _integrate(
    mesh: Mesh,
    amplitude: PointFunction,
    psi: PointFunction,
    h: float,
    factor: float,
    m: int,
) -> complex:
    bary, weights = _subdivision_rule(m)
    vertices = mesh.nodes[mesh.triangles]
    points = np.einsum("qa,tai->tqi", bary, vertices)

    phase = np.exp(1j * factor * psi(points) / h)
    values = np.asarray(amplitude(points)) * phase
    total = np.sum(mesh.areas[:, None] * weights[None, :] * values)
    return complex(total)


def oscillatory_integral(
    amplitude: PointFunction,
    psi: PointFunction,
    h: float,
    mesh: Optional[Mesh] = None,
    factor: float = 4.0,
) -> OscillatoryIntegral:
    """
    Computes int exp(i factor psi / h) A dV over the meshed domain. Every
    triangle is split into m^2 subtriangles, with m chosen so that the
    subtriangles carry at least POINTS_PER_WAVELENGTH points per wavelength,
    and integrated with the edge-midpoint rule. The integral is repeated with
    twice the subdivision; the finer value is returned and the difference
    serves as error estimate.

    Parameters
    ----------
    amplitude
        Callable of points of shape (..., 2) returning the amplitude A.
    psi
        Callable of points returning the real phase psi.
    h
        Semiclassical parameter.
    mesh
        The mesh, by default the unit disk at level DEFAULT_LEVEL.
    factor
        Frequency factor of the oscillation.

    Raises
    ------
    UnderResolvedOscillationError
        When the required subdivision exceeds MAX_SUBDIVISION.
    """
    if h <= 0:
        raise ValueError(f"Semiclassical parameter must be positive, got {h}.")

    mesh = build_mesh(unit_disk(), DEFAULT_LEVEL) if mesh is None else mesh

    probe = np.einsum(
        "qa,tai->tqi",
        _subdivision_rule(4)[0],
        mesh.nodes[mesh.triangles],
    )
    slope = factor * _max_gradient(psi, probe) / h
    wavelength = 2 * np.pi / slope if slope > 0 else np.inf
    target = wavelength / POINTS_PER_WAVELENGTH
    m = max(1, int(np.ceil(mesh.max_edge_length / target)))

    if 2 * m > MAX_SUBDIVISION:
        msg = (
            f"Under-resolved oscillation: h = {h:.4g} needs a subdivision "
            f"of {2 * m} > {MAX_SUBDIVISION}."
        )
        raise UnderResolvedOscillationError(msg)

    coarse = _integrate(mesh, amplitude, psi, h, factor, m)
    fine = _integrate(mesh, amplitude, psi, h, factor, 2 * m)
    n_points = 3 * (2 * m) ** 2 * mesh.n_triangles

    logger.debug(f"Oscillatory integral at h = {h:.4g}: m = {2 * m}.")
    return OscillatoryIntegral(fine, abs(fine - coarse), 2 * m, n_points)
