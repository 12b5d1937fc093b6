from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from scipy.interpolate import RegularGridInterpolator

from fermi_forge.exceptions import ResourceError

MAX_GRID_SIZE = 1024

FieldLike = Union[
    float, complex, np.ndarray, Callable[[np.ndarray], np.ndarray]
]


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """
    C-infinity transition from 0 (t <= 0) to 1 (t >= 1).
    """
    t = np.clip(t, 0, 1)
    with np.errstate(divide="ignore", over="ignore"):
        left = np.where(t > 0, np.exp(-1 / np.where(t > 0, t, 1)), 0.0)
        right = np.where(t < 1, np.exp(-1 / np.where(t < 1, 1 - t, 1)), 0.0)
    return left / (left + right)


@dataclass(frozen=True)
class CGOGrid:
    """
    A cell-centred tensor grid on the square [-extent, extent]^2 containing
    the unit disk. Fields are complex arrays of shape (size, size); axis 0
    runs along x and axis 1 along y.

    The extension operator multiplies by a smooth cutoff that equals one on
    |z| <= cutoff_inner and vanishes for |z| >= cutoff_outer.

    Parameters
    ----------
    size
        Number of cells per axis.
    extent
        Half-width of the square.
    cutoff_inner
        Radius up to which the cutoff equals one.
    cutoff_outer
        Radius beyond which the cutoff vanishes.
    """

    size: int = 128
    extent: float = 1.3
    cutoff_inner: float = 1.0
    cutoff_outer: float = 1.25

    def __post_init__(self):
        if self.size < 8:
            raise ValueError("Grid size must be at least 8.")

        if self.size > MAX_GRID_SIZE:
            msg = f"Grid size {self.size} exceeds the cap {MAX_GRID_SIZE}."
            raise ResourceError(msg)

        if not 1 <= self.cutoff_inner < self.cutoff_outer < self.extent:
            msg = "Need 1 <= cutoff_inner < cutoff_outer < extent."
            raise ValueError(msg)

    @property
    def spacing(self) -> float:
        return 2 * self.extent / self.size

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.extent + (np.arange(self.size) + 0.5) * self.spacing

    @cached_property
    def z(self) -> np.ndarray:
        x, y = np.meshgrid(self.axis, self.axis, indexing="ij")
        return x + 1j * y

    @cached_property
    def points(self) -> np.ndarray:
        """
        Grid points as real coordinates, shape (size, size, 2).
        """
        return np.stack([self.z.real, self.z.imag], axis=-1)

    @cached_property
    def inside(self) -> np.ndarray:
        """
        Mask of the grid points in the closed unit disk.
        """
        return np.abs(self.z) <= 1.0

    @cached_property
    def cutoff(self) -> np.ndarray:
        width = self.cutoff_outer - self.cutoff_inner
        t = (self.cutoff_outer - np.abs(self.z)) / width
        return _smooth_step(t)

    @cached_property
    def support(self) -> np.ndarray:
        return self.cutoff > 0

    def field(self, value: FieldLike) -> np.ndarray:
        """
        Turns a constant, a callable of points of shape (..., 2), or an
        array of grid shape into a complex grid field.
        """
        if callable(value):
            value = value(self.points)

        values = np.asarray(value, dtype=complex)
        return np.array(np.broadcast_to(values, self.z.shape))

    def extend(self, values: np.ndarray) -> np.ndarray:
        return self.cutoff * values

    def sample(self, values: np.ndarray, points: np.ndarray) -> np.ndarray:
        """
        Bilinear interpolation of a grid field at points of shape (..., 2)
        inside the cell centres.
        """
        axes = (self.axis, self.axis)
        real = RegularGridInterpolator(axes, np.real(values))(points)
        imag = RegularGridInterpolator(axes, np.imag(values))(points)
        return real + 1j * imag

    def dx(self, values: np.ndarray) -> np.ndarray:
        return np.gradient(values, self.spacing, axis=0)

    def dy(self, values: np.ndarray) -> np.ndarray:
        return np.gradient(values, self.spacing, axis=1)

    def d(self, values: np.ndarray) -> np.ndarray:
        """
        The holomorphic derivative (d_x - i d_y) / 2 by central differences.
        """
        return 0.5 * (self.dx(values) - 1j * self.dy(values))

    def dbar(self, values: np.ndarray) -> np.ndarray:
        """
        The antiholomorphic derivative (d_x + i d_y) / 2 by central
        differences.
        """
        return 0.5 * (self.dx(values) + 1j * self.dy(values))

    def integrate(self, values: np.ndarray) -> complex:
        """
        Integral over the unit disk.
        """
        return complex(np.sum(values[self.inside]) * self.cell_area)

    def norm(self, values: np.ndarray, p: float = 2) -> float:
        """
        L^p norm over the unit disk.
        """
        absolute = np.abs(values[self.inside])
        return float((np.sum(absolute**p) * self.cell_area) ** (1 / p))
