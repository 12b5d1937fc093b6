import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from fermi_forge.exceptions import (
    EigenvalueCollisionError,
    NewtonDivergenceError,
    RangeViolationError,
)
from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.pde_core import (
    BoundaryFunction,
    assemble_operator,
    solve_dirichlet,
)

from .area import area
from .density import check_range
from .msq_residual import msq_jacobian, msq_residual

logger = logging.getLogger(__name__)

MAX_HALVINGS = 20


@dataclass(frozen=True, eq=False)
class GraphSolution:
    """
    A converged minimal graph u with boundary values f.

    Parameters
    ----------
    u
        Nodal values of the graph function.
    boundary
        The boundary data.
    iterations
        Number of Newton iterations, counting the final convergence check.
    residual
        Final interior residual norm.
    area
        Area of the graph.
    residual_history
        Interior residual norm at every iteration.
    convergence_constant
        Largest ratio r_{k+1} / r_k^2 over the last three steps, or None when
        fewer than two steps were taken.
    """

    u: np.ndarray
    boundary: Union[BoundaryFunction, np.ndarray, None]
    iterations: int
    residual: float
    area: float
    residual_history: list[float] = field(default_factory=list)
    convergence_constant: Optional[float] = None


def solve_minimal_graph(
    family: MetricFamily,
    mesh: Mesh,
    f: Union[BoundaryFunction, np.ndarray, None],
    tol: float = 1e-10,
    max_iterations: int = 30,
) -> GraphSolution:
    """
    Solves the minimal surface equation for a graph with boundary values f
    by damped Newton iteration, starting from the harmonic lift of f. The
    Newton matrix is the exact Hessian of the discrete area functional.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    f
        Boundary data: a BoundaryFunction or nodal vector.
    tol
        Tolerance on the Euclidean norm of the interior residual.
    max_iterations
        Maximum number of Newton steps.

    Returns
    -------
    GraphSolution
        The converged solution.

    Raises
    ------
    NewtonDivergenceError
        When backtracking cannot decrease the residual or the iteration cap
        is reached.
    EigenvalueCollisionError
        When the Newton matrix is singular.
    RangeViolationError
        When the harmonic lift already leaves the admissible band.
    """
    interior = mesh.interior_nodes
    u = solve_dirichlet(assemble_operator(mesh), f)

    if np.iscomplexobj(u):
        raise ValueError("Minimal graphs need real boundary data.")

    check_range(family, u)

    residual = msq_residual(family, mesh, u)[interior]
    history = [float(np.linalg.norm(residual))]

    while history[-1] > tol:
        if len(history) > max_iterations:
            msg = f"Newton did not converge in {max_iterations} iterations."
            raise NewtonDivergenceError(msg)

        jacobian = msq_jacobian(family, mesh, u)
        step = np.zeros_like(u)
        step[interior] = jacobian.interior_factor.solve(-residual)

        u, residual = _backtrack(family, mesh, u, step, history[-1])
        history.append(float(np.linalg.norm(residual)))
        logger.debug(f"Newton step {len(history) - 1}: {history[-1]:.3e}.")

    constant = _convergence_constant(history)
    if constant is not None:
        logger.info(f"Newton convergence constant C = {constant:.3e}.")

    return GraphSolution(
        u=u,
        boundary=f,
        iterations=len(history),
        residual=history[-1],
        area=area(family, mesh, u),
        residual_history=history,
        convergence_constant=constant,
    )


def _backtrack(family, mesh, u, step, current):
    interior = mesh.interior_nodes
    scale = 1.0

    for _ in range(MAX_HALVINGS + 1):
        trial = u + scale * step

        try:
            residual = msq_residual(family, mesh, trial)[interior]
        except RangeViolationError:
            scale /= 2
            continue

        if np.linalg.norm(residual) < current:
            return trial, residual

        scale /= 2

    msg = f"Damping exhausted after {MAX_HALVINGS} halvings."
    raise NewtonDivergenceError(msg)


def _convergence_constant(history: list[float]) -> Optional[float]:
    ratios = [
        new / old**2
        for old, new in zip(history[-4:-1], history[-3:])
        if old > 0
    ]
    return max(ratios) if ratios else None


def well_posedness_radius(
    family: MetricFamily,
    mesh: Mesh,
    mode: int = 1,
    steps: int = 8,
    tol: float = 1e-10,
) -> float:
    """
    Estimates the radius of the small-data ball in which the solver
    converges, by bisection on the amplitude a of boundary data a cos(n t)
    over [0, s_max].

    Returns
    -------
    float
        The largest amplitude for which the solve succeeded.
    """
    failures = (
        NewtonDivergenceError,
        EigenvalueCollisionError,
        RangeViolationError,
    )

    def converges(amplitude: float) -> bool:
        f = BoundaryFunction.trigonometric(mesh.domain, mode, amplitude)
        try:
            solve_minimal_graph(family, mesh, f, tol)
        except failures:
            return False
        return True

    lo, hi = 0.0, family.s_max

    if converges(hi):
        return hi

    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if converges(mid) else (lo, mid)

    logger.info(f"Well-posedness radius of {family!r}: {lo:.4f}.")
    return lo
