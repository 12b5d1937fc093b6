import numpy as np

PROFILE_NAMES = ("constant", "bump")


def profile(name: str, points: np.ndarray) -> np.ndarray:
    """
    Evaluates a named spatial profile at the given points.

    Parameters
    ----------
    name
        "constant" (identically one) or "bump", the boundary-flat polynomial
        (1 - |x|^2)^3 restricted to the unit disk.
    points
        Points of shape (..., 2).
    """
    points = np.asarray(points, dtype=float)

    if name == "constant":
        return np.ones(points.shape[:-1])
    elif name == "bump":
        return boundary_flat_cutoff(points, order=3)

    raise ValueError(f"Unknown profile {name!r}; use {PROFILE_NAMES}.")


def boundary_flat_cutoff(points: np.ndarray, order: int = 6) -> np.ndarray:
    """
    (1 - |x|^2)^order inside the unit disk and zero outside. Vanishes to the
    given order on the unit circle.
    """
    radius2 = np.sum(np.asarray(points, dtype=float) ** 2, axis=-1)
    return np.clip(1 - radius2, 0, None) ** order


def gaussian(
    points: np.ndarray, center: complex = 0j, width: float = 0.25
) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    dist2 = (points[..., 0] - center.real) ** 2
    dist2 += (points[..., 1] - center.imag) ** 2
    return np.exp(-dist2 / (2 * width**2))
