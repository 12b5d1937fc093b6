from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mesh import Mesh
from .metric_family import MetricFamily
from .metric_jets import metric_jets

CLOSED_FORM_TOL = 1e-10
NUMERIC_TOL = 1e-6


@dataclass(frozen=True)
class MinimalityReport:
    is_minimal: bool
    max_residual: float
    trace_free_residual: float
    tolerance: float

    def __bool__(self) -> bool:
        return self.is_minimal


def check_minimality(
    family: MetricFamily, mesh: Mesh, tol: Optional[float] = None
) -> MinimalityReport:
    """
    Checks whether u = 0 solves the minimal surface equation, i.e., whether
    h = Tr(g^{-1} dg/ds) vanishes at s = 0 on every node. Also reports the
    g-trace of k1, which equals -h.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The nodes to check.
    tol
        Tolerance on the residual. Defaults to 1e-10 for closed-form
        families and 1e-6 for numeric ones.

    Returns
    -------
    MinimalityReport
        Truthy iff the family is minimal within tolerance.
    """
    if tol is None:
        tol = CLOSED_FORM_TOL if family.closed_form else NUMERIC_TOL

    jets = metric_jets(family, mesh)
    residual = float(np.max(np.abs(jets.h)))
    trace_k1 = np.trace(jets.g @ jets.k1, axis1=-2, axis2=-1)
    trace_free_residual = float(np.max(np.abs(trace_k1)))

    return MinimalityReport(
        is_minimal=max(residual, trace_free_residual) <= tol,
        max_residual=residual,
        trace_free_residual=trace_free_residual,
        tolerance=tol,
    )
