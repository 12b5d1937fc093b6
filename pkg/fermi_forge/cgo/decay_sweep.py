import logging
from functools import partial
from typing import Any, Optional, Sequence

import numpy as np

from fermi_forge.geometry import ExponentialFamily
from fermi_forge.parallel import parallel_map

from .apply_th import th_norm
from .build_cgo import build_cgo, potential_from_family
from .dbar_psi_inv import is_resolved
from .grid import CGOGrid
from .phase import Phase, phase_catalog

logger = logging.getLogger(__name__)

DECAY_PHASES = ("line", "morse", "theta1", "theta2", "theta3")
QUANTITIES = ("r", "d_r", "dbar_r", "th")


def decay_phase(name: str, z0: complex = 0j) -> Phase:
    """
    Phases of the decay experiments: "line" is P = z, without critical
    points; "morse" is the antiholomorphic conj(z^2), with a nondegenerate
    critical point at the origin; the thetas come from ``phase_catalog``.
    """
    if name == "line":
        return Phase((0, 1), name="line")
    if name == "morse":
        return Phase((0, 0, 1), antiholomorphic=True, name="morse")
    if name in ("theta1", "theta2", "theta3"):
        return phase_catalog(z0)[name]

    msg = f"Unknown decay phase {name!r}; use {list(DECAY_PHASES)}."
    raise ValueError(msg)


def _sweep_point(
    h: float,
    phase: Phase,
    q: np.ndarray,
    grid: CGOGrid,
    p_norms: Sequence[float],
) -> list[dict[str, Any]]:
    def row(p, quantity, norm, resolved=True):
        return {
            "h": h,
            "phase": phase.name,
            "p": p,
            "quantity": quantity,
            "norm": norm,
            "resolved": resolved,
        }

    psi = phase.psi(grid.z)
    if not is_resolved(grid, psi, h):
        logger.warning(f"Skipping under-resolved h = {h:.4g}.")
        nan = float("nan")
        rows = [
            row(p, qty, nan, False) for p in p_norms for qty in QUANTITIES[:3]
        ]
        return rows + [row(2, "th", nan, False)]

    solution = build_cgo(phase, q, h, grid)

    rows = []
    for p in p_norms:
        d_norm, dbar_norm = solution.derivative_norms(p)
        rows.append(row(p, "r", solution.remainder_norm(p)))
        rows.append(row(p, "d_r", d_norm))
        rows.append(row(p, "dbar_r", dbar_norm))

    holomorphic_psi = np.imag(phase.holomorphic_part().value(grid.z))
    q_used = np.conj(q) if phase.antiholomorphic else q
    rows.append(row(2, "th", th_norm(grid, holomorphic_psi, q_used, h)))

    logger.info(f"Decay sweep {phase.name}: h = {h:.4g} done.")
    return rows


def decay_sweep(
    phase: Phase,
    h_list: Sequence[float],
    p_norms: Sequence[float] = (2, 4),
    grid: Optional[CGOGrid] = None,
    q: Optional[np.ndarray] = None,
) -> list[dict[str, Any]]:
    """
    Measures the remainder norms of the CGO solutions of a phase over a
    range of semiclassical parameters.

    Parameters
    ----------
    phase
        The phase.
    h_list
        The semiclassical parameters.
    p_norms
        The Lebesgue exponents p of the reported L^p norms.
    grid
        The grid. Defaults to ``CGOGrid()``.
    q
        The potential on the grid. Defaults to h1 / 2 of the exponential metric
        family with the bump profile.

    Returns
    -------
    list[dict[str, Any]]
        Rows with keys h, phase, p, quantity, norm and resolved. Quantities
        are "r", "d_r" and "dbar_r" for the L^p norms of r_h, d r_h and
        dbar r_h, and "th" for the operator-norm proxy of T_h. Unresolved
        values of h give NaN norms with ``resolved`` False.
    """
    grid = CGOGrid() if grid is None else grid
    if q is None:
        family = ExponentialFamily(profile="bump")
        q = potential_from_family(grid, family)

    func = partial(_sweep_point, phase=phase, q=q, grid=grid, p_norms=p_norms)
    results = parallel_map(func, h_list, prefer="threads")
    return [row for rows in results for row in rows]
