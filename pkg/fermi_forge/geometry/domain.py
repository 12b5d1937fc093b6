from dataclasses import dataclass
from typing import Optional

import numpy as np

DOMAIN_KINDS = ("unit_disk", "annulus")


@dataclass(frozen=True)
class BoundaryCircle:
    """
    A boundary circle centred at the origin. The orientation is +1 when the
    circle is traversed counterclockwise (domain on the left) and -1 when it
    is traversed clockwise.
    """

    radius: float
    orientation: int


@dataclass(frozen=True)
class Domain:
    """
    A planar domain: the unit disk or the annulus inner_radius < |x| < 1.

    Parameters
    ----------
    kind
        One of "unit_disk" or "annulus".
    inner_radius
        Inner radius of the annulus, strictly between 0 and 1. Must be None
        for the unit disk.
    """

    kind: str
    inner_radius: Optional[float] = None

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            msg = f"Unknown domain kind {self.kind!r}; use {DOMAIN_KINDS}."
            raise ValueError(msg)

        if self.kind == "annulus":
            if self.inner_radius is None or not 0 < self.inner_radius < 1:
                msg = "Annulus inner radius must lie strictly in (0, 1)."
                raise ValueError(msg)
        elif self.inner_radius is not None:
            raise ValueError("The unit disk has no inner radius.")

    @property
    def boundary_components(self) -> tuple[BoundaryCircle, ...]:
        """
        Boundary circles, outer circle first. The inner circle of the
        annulus is traversed clockwise so the domain stays on the left.
        """
        outer = BoundaryCircle(1.0, 1)

        if self.kind == "unit_disk":
            return (outer,)

        return (outer, BoundaryCircle(float(self.inner_radius), -1))

    @property
    def area(self) -> float:
        inner = self.inner_radius or 0.0
        return float(np.pi * (1 - inner**2))

    def contains(self, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
        """
        Returns a boolean mask of points at distance at least ``margin`` from
        the boundary.
        """
        return self.distance_to_boundary(points) >= margin

    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        """
        Signed distance to the boundary, positive inside the domain.
        """
        radii = np.hypot(*np.asarray(points, dtype=float).T)
        distance = 1 - radii

        if self.kind == "annulus":
            distance = np.minimum(distance, radii - self.inner_radius)

        return distance


def unit_disk() -> Domain:
    return Domain("unit_disk")


def annulus(inner_radius: float) -> Domain:
    return Domain("annulus", inner_radius)
