import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from fermi_forge.exceptions import SeriesDivergenceError
from fermi_forge.geometry import MetricFamily, evaluate_jets

from .apply_th import apply_th, conjugation_potential
from .dbar_psi_inv import dbar_psi_inv, dbar_psi_star_inv
from .grid import CGOGrid, FieldLike
from .phase import Phase

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-3
MAX_TERMS = 40


@dataclass
class CGOSolution:
    """
    A complex geometric optics solution of (Delta + q) v = 0 on the unit
    disk, v = exp(P / h)(a + r) for a holomorphic phase P and
    v = exp(conj(P) / h)(conj(a) + r) for an antiholomorphic one.

    Attributes
    ----------
    phase
        The phase.
    amplitude
        The holomorphic polynomial a.
    h
        Semiclassical parameter.
    n_terms
        Index J of the last Neumann-series term included.
    grid
        The grid the fields live on.
    r
        The remainder r_h.
    s
        The Neumann-series sum s_h of the first-order system.
    fixed_point_defect
        L^2 norm over the disk of s - b - T_h s, the defect of the
        truncated Neumann series as a fixed point, i.e., the norm of the
        first neglected term. The PDE residual exp(-P / h)(Delta + q) v
        equals 4 exp(-2i psi / h) times the d-derivative of this defect.
    term_norms
        Norms of the Neumann-series terms T_h^j b.
    contraction
        Largest ratio of consecutive term norms, NaN for fewer than two
        terms.
    """

    phase: Phase
    amplitude: Polynomial
    h: float
    n_terms: int
    grid: CGOGrid
    r: np.ndarray
    s: np.ndarray
    fixed_point_defect: float
    term_norms: list[float] = field(default_factory=list)
    contraction: float = np.nan

    def exponent(self) -> np.ndarray:
        return self.phase.value(self.grid.z) / self.h

    def factor(self) -> np.ndarray:
        return np.exp(self.exponent())

    def amplitude_values(self) -> np.ndarray:
        values = self.amplitude(self.grid.z)
        return np.conj(values) if self.phase.antiholomorphic else values

    def values(self) -> np.ndarray:
        return self.factor() * (self.amplitude_values() + self.r)

    def scaled_derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Returns (d v, dbar v) divided by the exponential factor, so that the
        large exponential never enters products of solutions.
        """
        grid, z = self.grid, self.grid.z
        total = self.amplitude_values() + self.r
        slope = self.phase.derivative(z) / self.h
        amp_slope = self.amplitude.deriv()(z)

        if self.phase.antiholomorphic:
            d_part = grid.d(self.r)
            dbar_part = np.conj(slope) * total + np.conj(amp_slope)
            dbar_part = dbar_part + grid.dbar(self.r)
        else:
            d_part = slope * total + amp_slope + grid.d(self.r)
            dbar_part = grid.dbar(self.r)

        return d_part, dbar_part

    def remainder_norm(self, p: float = 2) -> float:
        return self.grid.norm(self.r, p)

    def derivative_norms(self, p: float = 2) -> tuple[float, float]:
        """
        L^p norms over the disk of d r and dbar r.
        """
        grid = self.grid
        return grid.norm(grid.d(self.r), p), grid.norm(grid.dbar(self.r), p)


def _neumann_series(
    grid: CGOGrid,
    source: np.ndarray,
    psi: np.ndarray,
    q: np.ndarray,
    h: float,
    n_terms: Optional[int],
    rtol: float,
    max_terms: int,
) -> tuple[np.ndarray, list[float]]:
    """
    Sums T_h^j source for j = 0, ..., J. With ``n_terms`` given, J is fixed;
    otherwise J is the first index whose term norm drops below ``rtol``
    times the first one.
    """
    term = source
    total = np.array(source, copy=True)
    norms = [grid.norm(term)]

    if norms[0] == 0:
        return total, norms

    limit = max_terms if n_terms is None else n_terms
    for _ in range(limit):
        if n_terms is None and norms[-1] < rtol * norms[0]:
            break

        term = apply_th(grid, term, psi, q, h)
        norms.append(grid.norm(term))
        total += term

        ratio = norms[-1] / norms[-2]
        logger.debug(f"Neumann term {len(norms) - 1}: {norms[-1]:.3e}.")

        if n_terms is None and ratio >= 1:
            msg = (
                f"Neumann series does not contract at h = {h:.4g}: "
                f"term ratio {ratio:.3f} >= 1."
            )
            raise SeriesDivergenceError(msg)
    else:
        if n_terms is None and norms[-1] >= rtol * norms[0]:
            msg = f"Neumann series did not reach rtol in {max_terms} terms."
            raise SeriesDivergenceError(msg)

    return total, norms


def build_cgo(
    phase: Phase,
    q: FieldLike,
    h: float,
    grid: Optional[CGOGrid] = None,
    amplitude: Optional[Polynomial] = None,
    n_terms: Optional[int] = None,
    rtol: float = DEFAULT_RTOL,
    max_terms: int = MAX_TERMS,
) -> CGOSolution:
    """
    Builds the CGO solution exp(P / h)(a + r_h) of (Delta + q) v = 0. The
    remainder solves the first-order system

        s_h = sum_j T_h^j dbar_psi^{*-1}(q' a),  r_h = -dbar_psi^{-1} s_h,

    with q' = -q / 4 and psi = Im P. An antiholomorphic phase conj(P) gives
    the conjugate of the solution built from P, conj(a) and conj(q).

    Parameters
    ----------
    phase
        The phase.
    q
        The potential: a constant, a callable of points or a grid field.
    h
        Semiclassical parameter.
    grid
        The grid. Defaults to ``CGOGrid()``.
    amplitude
        The holomorphic amplitude a, by default 1.
    n_terms
        Fixed truncation index J. By default J is chosen adaptively.
    rtol
        Relative term norm at which the adaptive truncation stops.
    max_terms
        Cap on the number of adaptive terms.

    Raises
    ------
    SeriesDivergenceError
        When the adaptive series stops contracting.
    UnderResolvedOscillationError
        When the grid does not resolve exp(2i psi / h).
    """
    grid = CGOGrid() if grid is None else grid
    amplitude = Polynomial([1]) if amplitude is None else amplitude

    q = grid.field(q)
    if phase.antiholomorphic:
        q = np.conj(q)

    z = grid.z
    psi = np.imag(phase.holomorphic_part().value(z))
    a = amplitude(z)

    source = dbar_psi_star_inv(grid, conjugation_potential(q) * a, psi, h)
    s, norms = _neumann_series(
        grid, source, psi, q, h, n_terms, rtol, max_terms
    )
    r = -dbar_psi_inv(grid, s, psi, h)

    if norms[0] == 0:
        fixed_point_defect = 0.0
    else:
        defect = s - source - apply_th(grid, s, psi, q, h)
        fixed_point_defect = grid.norm(defect)

    ratios = [
        after / before for before, after in zip(norms, norms[1:]) if before
    ]
    contraction = max(ratios) if ratios else np.nan
    n_used = len(norms) - 1

    logger.info(
        f"CGO {phase.name or 'phase'} at h = {h:.4g}: J = {n_used}, "
        f"fixed-point defect = {fixed_point_defect:.3e}."
    )

    if phase.antiholomorphic:
        r, s = np.conj(r), np.conj(s)

    return CGOSolution(
        phase=phase,
        amplitude=amplitude,
        h=h,
        n_terms=n_used,
        grid=grid,
        r=r,
        s=s,
        fixed_point_defect=fixed_point_defect,
        term_norms=norms,
        contraction=contraction,
    )


def potential_from_family(grid: CGOGrid, family: MetricFamily) -> np.ndarray:
    """
    The potential q = h1 / 2 of the first linearization of a minimal metric
    family, evaluated on the grid.
    """
    jets = evaluate_jets(family, grid.points)
    return grid.field(jets.h1 / 2)
