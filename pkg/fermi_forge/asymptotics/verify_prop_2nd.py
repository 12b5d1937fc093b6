import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Optional, Sequence

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid, phase_catalog
from fermi_forge.geometry.tensor_field import TRACE_FREE_TOL
from fermi_forge.parallel import parallel_map

from .cgo_products import (
    TensorProfile,
    check_boundary_flat,
    complex_form,
    fit_slope,
    product_oscillation,
    resolve_potential,
    scaled_cgos,
    tensor_coefficients,
)

logger = logging.getLogger(__name__)

SECOND_ORDER_PHASES = ("theta1", "theta2", "theta3")


@dataclass
class ExpansionReport:
    """
    The three terms of the second-order identity with CGO solutions,

        term1 = int v1 K(grad v2, grad v3),
        term2 = int v2 K(grad v1, grad v3),
        term3 = int v3 K(grad v1, grad v2),

    and the leading integral
    rhs = h^-2 int exp(4i psi / h) conj(a) kappa theta1' theta2' a^2, per h.
    """

    z0: complex
    h: np.ndarray
    terms: np.ndarray
    rhs: np.ndarray
    slopes: dict[str, float] = field(default_factory=dict)

    @property
    def lhs(self) -> np.ndarray:
        return self.terms.sum(axis=1)

    @property
    def scaled_gap(self) -> np.ndarray:
        """
        h |lhs - rhs|, which vanishes as h -> 0.
        """
        return self.h * np.abs(self.lhs - self.rhs)

    @property
    def scaled_terms(self) -> np.ndarray:
        """
        h |term_i| per h, shape (n_h, 3).
        """
        return self.h[:, None] * np.abs(self.terms)

    def to_rows(self) -> list[dict[str, Any]]:
        rows = []
        for idx, h in enumerate(self.h):
            rows.append(
                {
                    "h": h,
                    "lhs_real": self.lhs[idx].real,
                    "lhs_imag": self.lhs[idx].imag,
                    "rhs_real": self.rhs[idx].real,
                    "rhs_imag": self.rhs[idx].imag,
                    "scaled_gap": self.scaled_gap[idx],
                    "scaled_term1": self.scaled_terms[idx, 0],
                    "scaled_term2": self.scaled_terms[idx, 1],
                }
            )
        return rows


def second_order_terms(
    kappa: np.ndarray,
    trace: np.ndarray,
    h: float,
    z0: complex,
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
) -> tuple[np.ndarray, complex]:
    """
    Returns the three CGO terms and the leading integral at one h.
    """
    catalog = phase_catalog(z0, lam)
    phases = [catalog[name] for name in SECOND_ORDER_PHASES]
    v1, v2, v3 = scaled_cgos(phases, q, h, grid)
    oscillation = product_oscillation(phases, grid, h)

    form = partial(complex_form, kappa, trace)
    terms = np.array(
        [
            grid.integrate(oscillation * v1.w * form(v2, v3)),
            grid.integrate(oscillation * v2.w * form(v1, v3)),
            grid.integrate(oscillation * v3.w * form(v1, v2)),
        ]
    )

    z = grid.z
    slopes = phases[0].derivative(z) * phases[1].derivative(z)
    rhs = grid.integrate(oscillation * kappa * slopes) / h**2

    logger.info(f"Second-order terms at h = {h:.4g} computed.")
    return terms, rhs


def verify_prop_2nd(
    K: TensorProfile,
    z0: complex = 0j,
    h_list: Sequence[float] = (0.1, 0.13, 0.17, 0.22, 0.3),
    grid: Optional[CGOGrid] = None,
    q: Optional[np.ndarray] = None,
    lam: float = DEFAULT_LAMBDA,
) -> ExpansionReport:
    """
    Checks the stationary-phase expansion of the second-order identity: the
    sum of the three CGO terms equals the leading integral up to o(1/h), and
    the first two terms are o(1/h) on their own.

    Parameters
    ----------
    K
        Callable of points returning a trace-free TensorField2 that vanishes
        on and outside the unit circle.
    z0
        Critical point of the Morse phase.
    h_list
        Semiclassical parameters, admissible for the grid.
    grid
        The grid, by default ``CGOGrid()``.
    q
        Potential of the CGO equation. Defaults to h1 / 2 of the bump
        exponential family.
    lam
        Scale of the Morse phase.

    Returns
    -------
    ExpansionReport
        The per-h terms, with the fitted slopes of the scaled gap and of the
        first two scaled terms.
    """
    grid = CGOGrid() if grid is None else grid
    q = resolve_potential(grid, q)

    tensor = K(grid.points)
    if tensor.trace_residual > TRACE_FREE_TOL:
        raise ValueError("K must be trace-free.")

    kappa, trace = tensor_coefficients(tensor)
    check_boundary_flat(grid, kappa, "K")

    h = np.asarray(h_list, dtype=float)
    func = partial(
        second_order_terms,
        kappa,
        trace,
        z0=z0,
        grid=grid,
        q=q,
        lam=lam,
    )
    results = parallel_map(func, h, prefer="threads")

    report = ExpansionReport(
        z0=complex(z0),
        h=h,
        terms=np.array([terms for terms, _ in results]),
        rhs=np.array([rhs for _, rhs in results]),
    )

    report.slopes = {
        "scaled_gap": fit_slope(report.scaled_gap, h),
        "scaled_term1": fit_slope(report.scaled_terms[:, 0], h),
        "scaled_term2": fit_slope(report.scaled_terms[:, 1], h),
    }
    return report
