import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MIN_POINTS = 5
MIN_DECADES = 1.0


@dataclass(frozen=True)
class DecayFit:
    """
    Least-squares fit log(value) = slope * log(h) + intercept.
    """

    slope: float
    intercept: float
    r_squared: float
    h: np.ndarray
    values: np.ndarray

    @property
    def constant(self) -> float:
        return float(np.exp(self.intercept))


def decay_fit(
    values: Sequence[float],
    h_list: Sequence[float],
    resolved: Optional[Sequence[bool]] = None,
) -> DecayFit:
    """
    Fits the algebraic decay rate of a quantity measured at several values
    of the semiclassical parameter.

    Parameters
    ----------
    values
        The measured quantity per h.
    h_list
        The semiclassical parameters.
    resolved
        Per-h flags of the resolution rule. Unresolved points are excluded
        with a warning, as are NaN and non-positive values.

    Returns
    -------
    DecayFit
        The fitted slope, intercept and coefficient of determination.

    Raises
    ------
    ValueError
        When fewer than two admissible points remain.
    """
    values = np.asarray(values, dtype=float)
    h = np.asarray(h_list, dtype=float)

    if values.shape != h.shape:
        msg = f"Got {values.size} values for {h.size} values of h."
        raise ValueError(msg)

    keep = np.isfinite(values) & (values > 0) & (h > 0)
    if not keep.all():
        warnings.warn("Excluding non-positive or non-finite values.")

    if resolved is not None:
        unresolved = ~np.asarray(resolved, dtype=bool)
        if unresolved.any():
            msg = f"Excluding under-resolved h = {h[unresolved].tolist()}."
            warnings.warn(msg)
        keep &= ~unresolved

    h, values = h[keep], values[keep]
    if h.size < 2:
        raise ValueError("Need at least two admissible points to fit.")

    if h.size < MIN_POINTS:
        warnings.warn(f"Fitting {h.size} < {MIN_POINTS} points.")

    if np.log10(h.max() / h.min()) < MIN_DECADES:
        warnings.warn("The values of h span less than a decade.")

    log_h, log_values = np.log(h), np.log(values)
    slope, intercept = np.polyfit(log_h, log_values, 1)

    fitted = slope * log_h + intercept
    total = np.sum((log_values - log_values.mean()) ** 2)
    error = np.sum((log_values - fitted) ** 2)
    r_squared = 1.0 - error / total if total > 0 else 1.0

    return DecayFit(float(slope), float(intercept), r_squared, h, values)
