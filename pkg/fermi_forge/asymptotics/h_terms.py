"""
Lower-order terms of the third-order identity. With m the fourth solution,
for every ordering (j, k, l) of the first three,

    H = - int v^j v^k k2(grad v^l, grad v^m)
        + int v^m g(grad(d2 / d v^j v^k), grad v^l)
        - int v^m k2(grad v^j, grad v^k) v^l
        - 1/2 int v^m v^j v^k v^l h3,

averaged over the six orderings. These terms are O(1/h), so h^3 |H|
vanishes in the limit.
"""
import logging
from itertools import permutations
from typing import Optional

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid, phase_catalog
from fermi_forge.geometry import (
    ExponentialFamily,
    MetricFamily,
    evaluate_jets,
)

from .cgo_products import (
    ScaledCGO,
    complex_form,
    metric_form,
    product_oscillation,
    scaled_cgos,
)
from .leading_integrals import THIRD_ORDER_PHASES

logger = logging.getLogger(__name__)


def _tensor_coefficients(values: np.ndarray):
    kappa = values[..., 0, 0] - values[..., 1, 1]
    kappa = kappa + 1j * (values[..., 0, 1] + values[..., 1, 0])
    trace = values[..., 0, 0] + values[..., 1, 1]
    return kappa, trace


def _weighted_product(
    grid: CGOGrid, weight: np.ndarray, u: ScaledCGO, v: ScaledCGO
) -> ScaledCGO:
    """
    The scaled solution-like product weight u v, with
    d(weight u v) = d(weight) u v + weight (du v + u dv).
    """
    w = weight * u.w * v.w
    d = grid.d(weight) * u.w * v.w + weight * (u.d * v.w + u.w * v.d)
    dbar = grid.dbar(weight) * u.w * v.w
    dbar = dbar + weight * (u.dbar * v.w + u.w * v.dbar)
    return ScaledCGO(u.phase, w, d, dbar)


def third_order_h_terms(
    h: float,
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    family: Optional[MetricFamily] = None,
    lam: float = DEFAULT_LAMBDA,
) -> complex:
    """
    Returns the symmetrized lower-order terms H of the third-order identity
    at one h, with the jets k2, d2 / d and h3 taken from the metric family.
    """
    family = ExponentialFamily(profile="bump") if family is None else family
    jets = evaluate_jets(family, grid.points)
    kappa, trace = _tensor_coefficients(jets.k2)
    density = jets.d2 / jets.d
    h3 = jets.h3

    catalog = phase_catalog(z0, lam)
    phases = [catalog[name] for name in THIRD_ORDER_PHASES]
    solutions = scaled_cgos(phases, q, h, grid)
    oscillation = product_oscillation(phases, grid, h)
    last = solutions[3]

    total = np.zeros(grid.z.shape, dtype=complex)
    for j, k, idx in permutations(range(3)):
        vj, vk, vl = solutions[j], solutions[k], solutions[idx]

        total -= vj.w * vk.w * complex_form(kappa, trace, vl, last)
        weighted = _weighted_product(grid, density, vj, vk)
        total += last.w * metric_form(weighted, vl)
        total -= last.w * complex_form(kappa, trace, vj, vk) * vl.w
        total -= 0.5 * last.w * vj.w * vk.w * vl.w * h3

    value = grid.integrate(oscillation * total) / 6
    logger.debug(f"Third-order lower-order terms at h = {h:.4g}: {value}.")
    return value
