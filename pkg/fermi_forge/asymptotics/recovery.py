import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from fermi_forge.cgo import DEFAULT_LAMBDA, CGOGrid

from .calibration import Calibration, calibrate, richardson_limit
from .cgo_products import fit_slope
from .leading_integrals import scaled_integrals

logger = logging.getLogger(__name__)


@dataclass
class RecoveryReport:
    """
    Pointwise recovery of an unknown from its leading integrals.

    Attributes
    ----------
    target
        Name of the recovered quantity.
    z0
        The recovery point.
    h
        The semiclassical parameters.
    values
        I(h) / h per h.
    estimates
        values / C per h, with C the calibrated constant.
    estimate
        The Richardson limit h -> 0 of the estimates.
    true_value
        The value of the unknown at z0.
    remainder_order
        Fitted order of |estimates - estimate| in h, NaN when no fit is
        possible.
    calibration
        The calibration used.
    extras
        Additional diagnostics per mode.
    """

    target: str
    z0: complex
    h: np.ndarray
    values: np.ndarray
    estimates: np.ndarray
    estimate: complex
    true_value: complex
    remainder_order: float
    calibration: Calibration
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def relative_error(self) -> float:
        """
        |estimate - true| / |true|, or |estimate| when the true value is
        zero.
        """
        scale = abs(self.true_value)
        error = abs(self.estimate - self.true_value)
        return error / scale if scale > 0 else error

    def to_rows(self) -> list[dict[str, Any]]:
        rows = []
        for idx, h in enumerate(self.h):
            rows.append(
                {
                    "target": self.target,
                    "h": h,
                    "estimate_real": self.estimates[idx].real,
                    "estimate_imag": self.estimates[idx].imag,
                    "true_real": self.true_value.real,
                    "true_imag": self.true_value.imag,
                }
            )
        return rows


def recover(
    kind: str,
    target: str,
    values: np.ndarray,
    true_value: complex,
    z0: complex,
    h_list: Sequence[float],
    grid: CGOGrid,
    q: np.ndarray,
    lam: float = DEFAULT_LAMBDA,
    calibration: Optional[Calibration] = None,
    trace: Optional[np.ndarray] = None,
) -> RecoveryReport:
    """
    Shared recovery loop: evaluates the leading integrals of ``values``,
    divides by the calibrated constant and extrapolates to h = 0.
    """
    if calibration is None:
        calibration = calibrate(kind, z0, h_list, grid, q, lam)
    elif calibration.kind != kind:
        msg = f"Calibration of kind {calibration.kind!r}, need {kind!r}."
        raise ValueError(msg)

    h = np.asarray(h_list, dtype=float)
    scaled = scaled_integrals(kind, values, h, z0, grid, q, lam, trace)
    estimates = scaled / calibration.constant
    estimate = richardson_limit(h, estimates)

    report = RecoveryReport(
        target=target,
        z0=complex(z0),
        h=h,
        values=scaled,
        estimates=estimates,
        estimate=estimate,
        true_value=complex(true_value),
        remainder_order=fit_slope(np.abs(estimates - estimate), h),
        calibration=calibration,
    )

    logger.info(
        f"Recovered {target} at z0 = {z0}: {estimate:.4g} "
        f"(true {report.true_value:.4g})."
    )
    return report
