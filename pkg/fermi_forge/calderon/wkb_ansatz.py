import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from fermi_forge.cgo import CGOGrid, DecayFit, Phase, decay_fit
from fermi_forge.cgo.cauchy_transform import cauchy_transform
from fermi_forge.geometry import Mesh
from fermi_forge.pde_core import (
    EllipticOperator,
    assemble_operator,
    gradient,
    green_solve,
    scatter,
)

logger = logging.getLogger(__name__)

MAX_TERMS = 3
MIN_DERIVATIVE = 1e-3


@dataclass
class WKBResult:
    """
    The correctors of u = exp(Phi / h)(a + sum_j h^j r_j) and the measured
    residual of the conjugated equation per h.

    Attributes
    ----------
    phase
        The holomorphic phase Phi.
    correctors
        The fields r_1, ..., r_N.
    sources
        The fields dbar r_1, ..., dbar r_N.
    h
        The semiclassical parameters.
    residuals
        L2 norm over the unit disk of exp(-Phi / h)(Delta + q) u per h.
    fit
        Power-law fit of the residuals in h.
    """

    phase: Phase
    correctors: list[np.ndarray]
    sources: list[np.ndarray]
    h: np.ndarray
    residuals: np.ndarray
    fit: Optional[DecayFit]

    @property
    def n_terms(self) -> int:
        return len(self.correctors)

    @property
    def slope(self) -> float:
        return np.nan if self.fit is None else self.fit.slope


def wkb_correctors(
    grid: CGOGrid,
    phase: Phase,
    a: np.ndarray,
    q: np.ndarray,
    n_terms: int,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """
    Solves the transport recursion of the ansatz. With Delta = -4 d dbar and
    holomorphic a, the orders of h in the conjugated equation give

        dbar r_1 = q a / (4 Phi'),
        dbar r_{j+1} = (q r_j - 4 d dbar r_j) / (4 Phi'),

    and each r_j is the Cauchy transform of its extended source. See
    ``mesh_correctors`` for the same recursion through the Green operator.
    """
    derivative = phase.derivative(grid.z)
    source = q * a / (4 * derivative)

    correctors, sources = [], []
    for _ in range(n_terms):
        corrector = cauchy_transform(grid, grid.extend(source))
        correctors.append(corrector)
        sources.append(source)
        source = (q * corrector - 4 * grid.d(source)) / (4 * derivative)

    return correctors, sources


def _holomorphic_derivative(mesh: Mesh, nodal: np.ndarray) -> np.ndarray:
    """
    (d_x - i d_y) / 2 of a nodal P1 field, averaged from the triangles to
    the nodes with area weights.
    """
    grad = gradient(mesh, nodal)
    local = 0.5 * (grad[:, 0] - 1j * grad[:, 1]) * mesh.areas
    total = scatter(mesh, np.repeat(local[:, None], 3, axis=1))
    weights = scatter(mesh, np.repeat(mesh.areas[:, None], 3, axis=1))
    return total / weights


def green_dbar_inverse(op: EllipticOperator, source: np.ndarray) -> np.ndarray:
    """
    Solves dbar r = source as r = -4 d G source, where G is the Dirichlet
    Green operator of ``op``, the Laplacian Delta = -4 d dbar.
    """
    return -4 * _holomorphic_derivative(op.mesh, green_solve(op, source))


def mesh_correctors(
    mesh: Mesh,
    phase: Phase,
    a: np.ndarray,
    q: np.ndarray,
    n_terms: int,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """
    The transport recursion of ``wkb_correctors`` at the nodes of a mesh of
    the disk, with dbar^{-1} taken through ``green_dbar_inverse``. The
    correctors differ from the grid ones by functions holomorphic in the
    disk; for radial sources the first correctors coincide.

    Parameters
    ----------
    mesh
        Mesh of the unit disk.
    phase
        Holomorphic phase.
    a
        Nodal values of the holomorphic amplitude.
    q
        Nodal values of the potential.
    n_terms
        The number of correctors.
    """
    op = assemble_operator(mesh)
    derivative = phase.derivative(mesh.nodes[:, 0] + 1j * mesh.nodes[:, 1])
    source = q * a / (4 * derivative)

    correctors, sources = [], []
    for _ in range(n_terms):
        corrector = green_dbar_inverse(op, source)
        correctors.append(corrector)
        sources.append(source)

        transport = q * corrector - 4 * _holomorphic_derivative(mesh, source)
        source = transport / (4 * derivative)

    return correctors, sources


def wkb_residual(
    grid: CGOGrid,
    phase: Phase,
    a: np.ndarray,
    q: np.ndarray,
    correctors: Sequence[np.ndarray],
    sources: Sequence[np.ndarray],
    h: float,
) -> np.ndarray:
    """
    exp(-Phi / h)(Delta + q) exp(Phi / h) w for w = a + sum_j h^j r_j,

        -4 (Phi' dbar w / h + d dbar w) + q w,

    with dbar w taken from the known sources and d dbar w by central
    differences.
    """
    w = a.astype(complex)
    dbar_w = np.zeros_like(w)

    for order, (corrector, source) in enumerate(zip(correctors, sources), 1):
        w = w + h**order * corrector
        dbar_w = dbar_w + h**order * source

    laplacian = grid.d(grid.dbar(w))
    first = phase.derivative(grid.z) * dbar_w / h
    return -4 * (first + laplacian) + q * w


def wkb_ansatz(
    phase: Phase,
    q,
    n_terms: int = 1,
    h_list: Sequence[float] = tuple(np.geomspace(0.05, 0.5, 6)),
    grid: Optional[CGOGrid] = None,
    amplitude: Optional[Polynomial] = None,
) -> WKBResult:
    """
    Builds the ansatz u = exp(Phi / h)(a + sum_j h^j r_j) for
    (Delta + q) u = 0 with a critical-point-free holomorphic phase Phi, and
    measures the residual over an h sweep. The residual is O(h^N) for N
    correctors.

    Parameters
    ----------
    phase
        Holomorphic phase with Phi' bounded away from zero on the grid
        support.
    q
        Potential: a constant, a callable of points or a grid array.
    n_terms
        The number N of correctors, at most MAX_TERMS.
    h_list
        Semiclassical parameters of the residual sweep.
    grid
        The grid, by default ``CGOGrid()``.
    amplitude
        Holomorphic polynomial amplitude a, by default 1.

    Raises
    ------
    ValueError
        When the phase is antiholomorphic or has a critical point on the
        grid support, or n_terms is out of range.
    """
    if not 0 <= n_terms <= MAX_TERMS:
        raise ValueError(f"Need 0 <= n_terms <= {MAX_TERMS}, got {n_terms}.")

    if phase.antiholomorphic:
        raise ValueError("The ansatz needs a holomorphic phase.")

    grid = CGOGrid() if grid is None else grid
    derivative = np.abs(phase.derivative(grid.z))
    if np.min(derivative[grid.support]) < MIN_DERIVATIVE:
        msg = "Phase has a (near) critical point on the grid support."
        raise ValueError(msg)

    amplitude = Polynomial([1.0]) if amplitude is None else amplitude
    a = amplitude(grid.z)
    q = grid.field(q)

    correctors, sources = wkb_correctors(grid, phase, a, q, n_terms)

    h = np.asarray(h_list, dtype=float)
    residuals = np.array(
        [
            grid.norm(wkb_residual(grid, phase, a, q, correctors, sources, x))
            for x in h
        ]
    )

    fit = None
    if np.all(residuals > 0):
        fit = decay_fit(residuals, h)
        logger.info(f"WKB residual with {n_terms} terms: h^{fit.slope:.2f}.")

    return WKBResult(phase, correctors, sources, h, residuals, fit)
