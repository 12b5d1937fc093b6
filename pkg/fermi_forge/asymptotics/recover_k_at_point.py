from typing import Optional, Sequence

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid
from fermi_forge.geometry.tensor_field import TRACE_FREE_TOL

from .calibration import Calibration
from .cgo_products import (
    TensorProfile,
    check_boundary_flat,
    evaluate_at,
    resolve_potential,
    tensor_coefficients,
)
from .recovery import RecoveryReport, recover


def recover_k_at_point(
    K: TensorProfile,
    z0: complex = 0j,
    h_list: Sequence[float] = (0.1, 0.13, 0.17, 0.22, 0.3),
    grid: Optional[CGOGrid] = None,
    q: Optional[np.ndarray] = None,
    lam: float = DEFAULT_LAMBDA,
    calibration: Optional[Calibration] = None,
) -> RecoveryReport:
    """
    Recovers kappa(z0) of a trace-free, boundary-flat tensor field K from
    the second-order identity: h times the CGO sum behaves like C kappa(z0)
    as h -> 0, with C calibrated on a reference bump.

    Parameters
    ----------
    K
        Callable of points returning a TensorField2.
    z0
        The recovery point.
    h_list
        Semiclassical parameters, admissible for the grid.
    grid
        The grid, by default ``CGOGrid()``.
    q
        Potential of the CGO equation.
    lam
        Scale of the Morse phase.
    calibration
        A "tensor" calibration to reuse. Calibrated on the fly when missing.

    Returns
    -------
    RecoveryReport
        The per-h estimates and the extrapolated kappa(z0).
    """
    grid = CGOGrid() if grid is None else grid
    q = resolve_potential(grid, q)

    tensor = K(grid.points)
    if tensor.trace_residual > TRACE_FREE_TOL:
        raise ValueError("K must be trace-free.")

    kappa, trace = tensor_coefficients(tensor)
    check_boundary_flat(grid, kappa, "K")
    true_value = evaluate_at(K, complex(z0)).kappa[0]

    return recover(
        "tensor",
        "kappa",
        kappa,
        true_value,
        z0,
        h_list,
        grid,
        q,
        lam,
        calibration,
        trace,
    )
