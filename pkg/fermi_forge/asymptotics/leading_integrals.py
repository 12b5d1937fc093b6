"""
The integrals whose leading stationary-phase coefficient carries the
pointwise value of the unknown. Each function returns I(h), normalized so
that I(h) / h tends to C times the value at z0 for a universal constant C.
"""
from functools import partial
from typing import Optional, Sequence

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid, phase_catalog
from fermi_forge.parallel import parallel_map

from .cgo_products import metric_form, product_oscillation, scaled_cgos
from .verify_prop_2nd import SECOND_ORDER_PHASES, second_order_terms

THIRD_ORDER_PHASES = ("phi1", "phi2", "phi3", "phi4")
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))

KINDS = ("tensor", "second_order", "third_order")


def tensor_integral(
    kappa: np.ndarray,
    trace: np.ndarray,
    h: float,
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
) -> complex:
    """
    h^2 times the sum of the three CGO terms of the second-order identity.
    """
    terms, _ = second_order_terms(kappa, trace, h, z0, grid, q, lam)
    return complex(h**2 * terms.sum())


def second_order_integral(
    values: np.ndarray,
    h: float,
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
) -> complex:
    """
    int Q v1 v2 v3 over the disk with the theta phases.
    """
    catalog = phase_catalog(z0, lam)
    phases = [catalog[name] for name in SECOND_ORDER_PHASES]
    v1, v2, v3 = scaled_cgos(phases, q, h, grid)
    oscillation = product_oscillation(phases, grid, h)

    return grid.integrate(oscillation * values * v1.w * v2.w * v3.w)


def third_order_integral(
    values: np.ndarray,
    h: float,
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
) -> complex:
    """
    h^4 int Q sum g(grad v^a, grad v^b) g(grad v^c, grad v^d) over the three
    pairings of the four phi solutions.
    """
    catalog = phase_catalog(z0, lam)
    phases = [catalog[name] for name in THIRD_ORDER_PHASES]
    solutions = scaled_cgos(phases, q, h, grid)
    oscillation = product_oscillation(phases, grid, h)

    total = np.zeros(grid.z.shape, dtype=complex)
    for (a, b), (c, d) in PAIRINGS:
        first = metric_form(solutions[a], solutions[b])
        second = metric_form(solutions[c], solutions[d])
        total += first * second

    return h**4 * grid.integrate(oscillation * values * total)


def scaled_integrals(
    kind: str,
    values: np.ndarray,
    h_list: Sequence[float],
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
    trace: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Returns I(h) / h for every h.

    Parameters
    ----------
    kind
        "tensor" (``values`` is kappa of a trace-free tensor field),
        "second_order" or "third_order" (``values`` is a scalar field).
    values
        The field on the grid.
    h_list
        The semiclassical parameters.
    z0
        The critical point.
    grid
        The grid.
    q
        Potential of the CGO equation.
    lam
        Scale of the Morse phase.
    trace
        Trace of the tensor field, zero by default.
    """
    if kind == "tensor":
        trace = np.zeros(grid.z.shape) if trace is None else trace
        func = partial(tensor_integral, values, trace)
    elif kind == "second_order":
        func = partial(second_order_integral, values)
    elif kind == "third_order":
        func = partial(third_order_integral, values)
    else:
        raise ValueError(f"Unknown integral kind {kind!r}; use {KINDS}.")

    def evaluate(h):
        return func(h, z0=z0, grid=grid, q=q, lam=lam) / h

    return np.array(parallel_map(evaluate, h_list, prefer="threads"))
