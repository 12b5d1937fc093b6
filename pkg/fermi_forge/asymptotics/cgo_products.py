"""
Products of CGO solutions on a CGOGrid. Each solution v = exp(F / h) w is
stored through its scaled value w and scaled derivatives exp(-F / h) d v and
exp(-F / h) dbar v; products of several solutions then carry the single
oscillating factor exp(sum F / h), which is computed exactly from the
phases instead of from the (possibly huge) individual exponentials.
"""
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from fermi_forge.cgo import (
    CGOGrid,
    Phase,
    build_cgo,
    check_resolution,
    decay_fit,
    potential_from_family,
)
from fermi_forge.geometry import ExponentialFamily, TensorField2

# Products of the solutions oscillate like exp(4i psi / h).
PRODUCT_FACTOR = 4.0
BOUNDARY_TOL = 1e-12

TensorProfile = Callable[[np.ndarray], TensorField2]
ScalarProfile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScaledCGO:
    """
    A CGO solution with the exponential factor removed.

    Attributes
    ----------
    phase
        The phase F of the factor exp(F / h).
    w
        The scaled value exp(-F / h) v.
    d
        The scaled holomorphic derivative exp(-F / h) d v.
    dbar
        The scaled antiholomorphic derivative exp(-F / h) dbar v.
    """

    phase: Phase
    w: np.ndarray
    d: np.ndarray
    dbar: np.ndarray


def scaled_cgos(
    phases: Sequence[Phase], q: np.ndarray, h: float, grid: CGOGrid
) -> list[ScaledCGO]:
    """
    Builds the CGO solutions of (Delta + q) v = 0 with amplitude one for
    each phase.
    """
    solutions = []
    for phase in phases:
        solution = build_cgo(phase, q, h, grid)
        d, dbar = solution.scaled_derivatives()
        w = solution.amplitude_values() + solution.r
        solutions.append(ScaledCGO(phase, w, d, dbar))

    return solutions


def default_potential(grid: CGOGrid) -> np.ndarray:
    """
    The potential h1 / 2 of the exponential family with the boundary-flat
    bump profile.
    """
    return potential_from_family(grid, ExponentialFamily(profile="bump"))


def product_oscillation(
    phases: Sequence[Phase], grid: CGOGrid, h: float
) -> np.ndarray:
    """
    exp(sum F / h) over the phases, after checking that the grid resolves
    it.
    """
    exponent = sum(phase.value(grid.z) for phase in phases)
    psi = np.imag(exponent) / PRODUCT_FACTOR
    check_resolution(grid, psi, h, PRODUCT_FACTOR)
    return np.exp(exponent / h)


def complex_form(
    kappa: np.ndarray, trace: np.ndarray, u: ScaledCGO, v: ScaledCGO
) -> np.ndarray:
    """
    The scaled tensor form K(grad u, grad v) written in complex derivatives,

        kappa du dv + conj(kappa) dbar u dbar v
            + Tr K (du dbar v + dbar u dv).
    """
    form = kappa * u.d * v.d + np.conj(kappa) * u.dbar * v.dbar
    return form + trace * (u.d * v.dbar + u.dbar * v.d)


def metric_form(u: ScaledCGO, v: ScaledCGO) -> np.ndarray:
    """
    The flat metric form g(grad u, grad v) = 2 (du dbar v + dbar u dv).
    """
    return 2 * (u.d * v.dbar + u.dbar * v.d)


def tensor_coefficients(
    tensor: TensorField2,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Returns (kappa, Tr K) of a tensor field.
    """
    values = tensor.values
    trace = values[..., 0, 0] + values[..., 1, 1]
    return tensor.kappa, trace


def check_boundary_flat(grid: CGOGrid, values: np.ndarray, name: str):
    """
    Raises ValueError unless the field vanishes outside the open unit disk.
    """
    values = np.asarray(values)
    outside = np.abs(grid.z) >= 1
    if np.max(np.abs(values[outside]), initial=0) > BOUNDARY_TOL:
        msg = f"{name} must vanish on and outside the unit circle."
        raise ValueError(msg)


def evaluate_at(profile: Callable, z0: complex):
    """
    Evaluates a profile of points at the single point z0.
    """
    return profile(np.array([[z0.real, z0.imag]]))


def resolve_potential(
    grid: CGOGrid, q: Optional[np.ndarray]
) -> np.ndarray:
    return default_potential(grid) if q is None else grid.field(q)


def fit_slope(values: np.ndarray, h: np.ndarray) -> float:
    """
    Slope of log(values) against log(h), NaN when no fit is possible.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return decay_fit(values, h).slope
        except ValueError:
            return np.nan
