import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid
from fermi_forge.geometry import boundary_flat_cutoff, gaussian

from .cgo_products import resolve_potential
from .leading_integrals import KINDS, scaled_integrals

logger = logging.getLogger(__name__)

REFERENCE_WIDTH = 0.4
FLAT_ORDER = 6
RICHARDSON_DEGREE = 2


def analytic_constant(kind: str, lam: float = DEFAULT_LAMBDA) -> float:
    """
    Leading stationary-phase coefficient C with I(h) / h -> C value(z0),
    from int exp(4i psi / h) F dV = pi h F(z0) / (4 lam) + O(h^2) for
    psi = Im(lam (z - z0)^2).
    """
    base = np.pi / (4 * lam)

    if kind == "tensor":
        # theta1' theta2' = -1 at the critical point.
        return -base
    if kind == "second_order":
        return base
    if kind == "third_order":
        # Three pairings contribute 8 |theta1' theta2'|^2 / h^4 in total.
        return 8 * base

    raise ValueError(f"Unknown integral kind {kind!r}; use {KINDS}.")


def richardson_limit(
    h: Sequence[float], values: Sequence[complex], degree=RICHARDSON_DEGREE
) -> complex:
    """
    Extrapolates values(h) to h = 0 by a least-squares polynomial fit in h
    of degree min(degree, len(h) - 1).
    """
    h = np.asarray(h, dtype=float)
    values = np.asarray(values, dtype=complex)

    if h.size == 0:
        raise ValueError("Need at least one value to extrapolate.")

    degree = min(degree, h.size - 1)
    real = np.polyfit(h, values.real, degree)[-1]
    imag = np.polyfit(h, values.imag, degree)[-1]
    return complex(real, imag)


def reference_profile(z0: complex, width: float = REFERENCE_WIDTH):
    """
    Boundary-flat Gaussian bump centred at z0, used as calibration field.
    """
    z0 = complex(z0)

    def func(points):
        bump = gaussian(points, center=z0, width=width)
        return bump * boundary_flat_cutoff(points, FLAT_ORDER)

    return func


@dataclass(frozen=True)
class Calibration:
    """
    Numerically calibrated leading coefficient of a leading integral.

    Attributes
    ----------
    kind
        The integral kind.
    constant
        The calibrated coefficient C.
    analytic
        The analytic coefficient.
    width
        Width of the reference Gaussian.
    values
        The reference I(h) / h per h.
    """

    kind: str
    constant: complex
    analytic: float
    width: float
    values: np.ndarray

    @property
    def relative_deviation(self) -> float:
        """
        Relative deviation of the calibrated from the analytic coefficient.
        """
        return abs(self.constant - self.analytic) / abs(self.analytic)


def calibrate(
    kind: str,
    z0: complex,
    h_list: Sequence[float],
    grid: Optional[CGOGrid] = None,
    q: Optional[np.ndarray] = None,
    lam: float = DEFAULT_LAMBDA,
    width: float = REFERENCE_WIDTH,
) -> Calibration:
    """
    Calibrates the leading coefficient of the given integral kind on the
    reference bump: diag(mu, -mu) with mu the bump for "tensor", the bump
    itself for the scalar kinds.

    Raises
    ------
    RuntimeError
        When the extrapolated reference value vanishes.
    """
    grid = CGOGrid() if grid is None else grid
    q = resolve_potential(grid, q)
    profile = reference_profile(z0, width)

    bump = profile(grid.points)
    at_z0 = float(profile(np.array([[z0.real, z0.imag]]))[0])

    if kind == "tensor":
        # kappa of diag(mu, -mu) is 2 mu.
        field, target = 2 * bump, 2 * at_z0
    else:
        field, target = bump, at_z0

    values = scaled_integrals(kind, field, h_list, z0, grid, q, lam)
    limit = richardson_limit(h_list, values)

    if abs(limit) == 0 or not np.isfinite(limit):
        msg = f"Calibration of {kind!r} failed: limit {limit}."
        raise RuntimeError(msg)

    constant = limit / target
    analytic = analytic_constant(kind, lam)

    logger.info(
        f"Calibrated {kind} constant {constant:.4f} "
        f"(analytic {analytic:.4f})."
    )
    return Calibration(kind, constant, analytic, width, values)
