import itertools
import logging
from typing import Callable, Sequence, TypeVar

import numpy as np

from fermi_forge.forward import nonlinear_dn, solve_minimal_graph
from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import DEFAULT_N_MODES, BoundaryFunction

from .boundary_terms import measure_weighted

logger = logging.getLogger(__name__)

_Value = TypeVar("_Value", float, np.ndarray)

DEFAULT_EPS = 1e-2


def mixed_difference(
    func: Callable[[np.ndarray], _Value], order: int, eps: float
) -> _Value:
    """
    Centered mixed difference of ``func`` at 0: approximates
    d^n func / dt_1 ... dt_n with the 2^n-point stencil

        sum_{sigma in {-1, 1}^n} (prod sigma) func(eps sigma) / (2 eps)^n,

    which is accurate to O(eps^2). ``order`` is 1, 2 or 3 for the 2-, 4-
    and 8-point stencils.
    """
    if order < 1:
        raise ValueError(f"Difference order must be positive, got {order}.")

    total = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=order):
        signs = np.array(signs)
        total = total + np.prod(signs) * func(eps * signs)

    return total / (2 * eps) ** order


def _combine(
    data: Sequence[BoundaryFunction], amplitudes: np.ndarray
) -> BoundaryFunction:
    total = amplitudes[0] * data[0]
    for amplitude, f in zip(amplitudes[1:], data[1:]):
        total = total + amplitude * f

    return total


def graph_derivative(
    family: MetricFamily,
    mesh: Mesh,
    data: Sequence[BoundaryFunction],
    eps: float = DEFAULT_EPS,
    tol: float = 1e-12,
) -> np.ndarray:
    """
    Mixed derivative d^n u / d eps_1 ... d eps_n at 0 of the minimal graph
    u with boundary values eps_1 f_1 + ... + eps_n f_n, by centered mixed
    differences of the nonlinear solver. For n = 1, 2, 3 it approximates
    v^j, w^{jk} and w^{jkl}.
    """

    def solve(amplitudes: np.ndarray) -> np.ndarray:
        f = _combine(data, amplitudes)
        return solve_minimal_graph(family, mesh, f, tol).u

    return mixed_difference(solve, len(data), eps)


def dn_derivative(
    family: MetricFamily,
    mesh: Mesh,
    data: Sequence[BoundaryFunction],
    test: BoundaryFunction,
    eps: float = DEFAULT_EPS,
    tol: float = 1e-12,
    n_modes: int = DEFAULT_N_MODES,
) -> float:
    """
    Mixed derivative at 0 of the pairing of the nonlinear DN map with
    ``test`` in the boundary measure dS_g of g(x, 0),

        eps -> int_{boundary} test Lambda(eps_1 f_1 + ... + eps_n f_n) dS_g,

    by centered mixed differences of the nonlinear solver.
    """
    weighted = measure_weighted(family, test.with_modes(n_modes))

    def pairing(amplitudes: np.ndarray) -> float:
        f = _combine(data, amplitudes)
        image = nonlinear_dn(family, mesh, f, n_modes, tol)
        return image.pairing(weighted).real

    value = mixed_difference(pairing, len(data), eps)
    logger.debug(f"DN derivative of order {len(data)}: {value:.6e}.")
    return float(value)
