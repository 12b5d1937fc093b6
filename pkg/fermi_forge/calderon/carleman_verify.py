import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import roots_legendre

from fermi_forge.exceptions import UnderResolvedOscillationError

from .smooth_field import WEIGHTS, HarmonicWeight, SmoothField

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 48
POINTS_PER_WAVELENGTH = 10

Potential = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class DiskQuadrature:
    """
    Tensor-product rule on the unit disk: Gauss-Legendre in the radius and
    the trapezoidal rule in the angle, which is spectrally accurate for
    smooth fields. ``resolution`` radial nodes and 2 * resolution angles;
    the boundary circle uses 4 * resolution angles.
    """

    resolution: int = DEFAULT_RESOLUTION

    @cached_property
    def volume(self) -> tuple[np.ndarray, np.ndarray]:
        nodes, weights = roots_legendre(self.resolution)
        radii = (nodes + 1) / 2
        angles = np.pi * np.arange(2 * self.resolution) / self.resolution

        r, t = np.meshgrid(radii, angles, indexing="ij")
        points = np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        # dA = r dr dt on [0, 1] x [0, 2 pi).
        w = (weights / 2 * radii)[:, None] * (np.pi / self.resolution)
        return points.reshape(-1, 2), np.broadcast_to(w, r.shape).ravel()

    @cached_property
    def boundary(self) -> tuple[np.ndarray, float]:
        n = 4 * self.resolution
        angles = 2 * np.pi * np.arange(n) / n
        points = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        return points, 2 * np.pi / n

    @property
    def max_frequency(self) -> float:
        """
        Largest wavenumber resolved with POINTS_PER_WAVELENGTH points along
        the coarsest (angular) direction of the rule.
        """
        spacing = np.pi / self.resolution
        return 2 * np.pi / (POINTS_PER_WAVELENGTH * spacing)


@dataclass
class CarlemanReport:
    """
    Ratios RHS / LHS of the Carleman estimate per field and h.

    Attributes
    ----------
    weight
        Name of the Carleman weight.
    h
        The semiclassical parameters.
    fields
        Names of the test fields.
    ratios
        Array of shape (n_fields, n_h); inf for vanishing fields.
    """

    weight: str
    h: np.ndarray
    fields: list[str]
    ratios: np.ndarray

    @property
    def min_ratio(self) -> float:
        return float(np.min(self.ratios, initial=np.inf))

    @property
    def min_per_h(self) -> np.ndarray:
        return np.min(self.ratios, axis=0)

    def to_rows(self) -> list[dict[str, Any]]:
        rows = []
        for i, name in enumerate(self.fields):
            for j, h in enumerate(self.h):
                rows.append(
                    {
                        "weight": self.weight,
                        "field": name,
                        "h": h,
                        "ratio": self.ratios[i, j],
                    }
                )
        return rows


def conjugated_operator(
    field: SmoothField,
    weight: HarmonicWeight,
    q: np.ndarray,
    h: float,
    points: np.ndarray,
) -> np.ndarray:
    """
    exp(-phi / h) (Delta + q) exp(phi / h) v for harmonic phi and the
    positive Laplacian Delta = -(d_x^2 + d_y^2):

        -lap v - 2 grad phi . grad v / h - |grad phi|^2 v / h^2 + q v.
    """
    grad_phi = weight.gradient(points)
    value = field.value(points)
    cross = np.sum(grad_phi * field.gradient(points), axis=-1)
    square = np.sum(grad_phi**2, axis=-1)

    total = -field.laplacian(points) - 2 * cross / h
    return total - square * value / h**2 + q * value


def carleman_terms(
    field: SmoothField,
    weight: HarmonicWeight,
    q: Potential,
    h: float,
    quadrature: DiskQuadrature,
) -> tuple[float, float]:
    """
    Returns (LHS, RHS) of the Carleman estimate

        |v|^2 <= |exp(-phi/h) (Delta + q) exp(phi/h) v|^2
                 + h^-3 |v|^2_bd + h^-1 |d_nu v|^2_bd + h^-1 |d_tau v|^2_bd,

    with L2 norms over the unit disk and its boundary circle.
    """
    points, weights = quadrature.volume
    potential = q(points) if callable(q) else float(q)

    lhs = np.sum(weights * np.abs(field.value(points)) ** 2)
    conj = conjugated_operator(field, weight, potential, h, points)
    rhs = np.sum(weights * np.abs(conj) ** 2)

    circle, ds = quadrature.boundary
    grad = field.gradient(circle)
    normal = np.sum(grad * circle, axis=-1)
    tangent = grad[:, 1] * circle[:, 0] - grad[:, 0] * circle[:, 1]

    rhs += h**-3 * ds * np.sum(np.abs(field.value(circle)) ** 2)
    rhs += h**-1 * ds * np.sum(np.abs(normal) ** 2)
    rhs += h**-1 * ds * np.sum(np.abs(tangent) ** 2)
    return float(lhs), float(rhs)


def carleman_verify(
    weight: Union[str, HarmonicWeight],
    q: Potential,
    fields: Sequence[SmoothField],
    h_list: Sequence[float],
    quadrature: Optional[DiskQuadrature] = None,
    max_frequency: float = 4.0,
) -> CarlemanReport:
    """
    Evaluates RHS / LHS of the Carleman estimate for every field and h.
    Vanishing fields give an infinite ratio and are skipped by the minimum.

    Parameters
    ----------
    weight
        A harmonic weight or its catalog name, "re_z" or "re_z2".
    q
        The potential, a constant or a callable of points.
    fields
        The test fields.
    h_list
        Semiclassical parameters.
    quadrature
        The disk quadrature, by default at DEFAULT_RESOLUTION.
    max_frequency
        Band limit of the test fields, checked against the quadrature.

    Raises
    ------
    UnderResolvedOscillationError
        When the quadrature does not resolve the band limit of the fields.
    """
    if isinstance(weight, str):
        if weight not in WEIGHTS:
            msg = f"Unknown weight {weight!r}; use {list(WEIGHTS)}."
            raise ValueError(msg)
        weight = WEIGHTS[weight]

    h = np.asarray(h_list, dtype=float)
    if np.any(h <= 0):
        raise ValueError("Semiclassical parameters must be positive.")

    quadrature = DiskQuadrature() if quadrature is None else quadrature
    if max_frequency > quadrature.max_frequency:
        msg = (
            f"Under-resolved Carleman check: resolution "
            f"{quadrature.resolution} does not resolve frequency "
            f"{max_frequency:.3g}."
        )
        raise UnderResolvedOscillationError(msg)

    ratios = np.full((len(fields), len(h)), np.inf)
    for i, field in enumerate(fields):
        for j, value in enumerate(h):
            lhs, rhs = carleman_terms(field, weight, q, value, quadrature)
            if lhs > 0:
                ratios[i, j] = rhs / lhs

    report = CarlemanReport(weight.name, h, [f.name for f in fields], ratios)
    logger.info(f"Carleman minimum ratio: {report.min_ratio:.4g}.")
    return report
