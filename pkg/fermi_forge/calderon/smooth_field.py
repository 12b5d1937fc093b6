from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SmoothField:
    """
    A smooth real or complex function on the plane with exact first
    derivatives and Euclidean Laplacian d_x^2 + d_y^2.

    Attributes
    ----------
    value
        Callable of points of shape (..., 2).
    gradient
        Callable returning shape (..., 2).
    laplacian
        Callable returning the Euclidean Laplacian.
    name
        Label used in tables.
    """

    value: PointFunction
    gradient: PointFunction
    laplacian: PointFunction
    name: str = ""

    @classmethod
    def zero(cls) -> "SmoothField":
        def zeros(points):
            return np.zeros(np.shape(points)[:-1])

        def zero_gradient(points):
            return np.zeros(np.shape(points))

        return cls(zeros, zero_gradient, zeros, "zero")

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        n_waves: int = 6,
        max_frequency: float = 4.0,
        name: str = "random",
    ) -> "SmoothField":
        """
        Band-limited random field sum_k a_k cos(w_k . x + b_k) with
        frequencies |w_k| <= max_frequency and unit-variance amplitudes.
        """
        radius = max_frequency * np.sqrt(rng.uniform(size=n_waves))
        angle = rng.uniform(0, 2 * np.pi, size=n_waves)
        freqs = np.stack([radius * np.cos(angle), radius * np.sin(angle)], 1)
        amps = rng.normal(size=n_waves) / np.sqrt(n_waves)
        shifts = rng.uniform(0, 2 * np.pi, size=n_waves)

        def argument(points):
            return np.asarray(points) @ freqs.T + shifts

        def value(points):
            return np.cos(argument(points)) @ amps

        def gradient(points):
            return -(np.sin(argument(points)) * amps) @ freqs

        def laplacian(points):
            return -np.cos(argument(points)) @ (amps * radius**2)

        return cls(value, gradient, laplacian, name)

    @classmethod
    def harmonic(cls, degree: int, name: Optional[str] = None):
        """
        Re z^degree, which is harmonic.
        """

        def complex_points(points):
            points = np.asarray(points, dtype=float)
            return points[..., 0] + 1j * points[..., 1]

        def value(points):
            return np.real(complex_points(points) ** degree)

        def gradient(points):
            # d/dx Re f = Re f', d/dy Re f = -Im f' for holomorphic f.
            derivative = degree * complex_points(points) ** (degree - 1)
            return np.stack([derivative.real, -derivative.imag], axis=-1)

        def laplacian(points):
            return np.zeros(np.shape(points)[:-1])

        return cls(value, gradient, laplacian, name or f"re_z{degree}")

    def damped(self, weight: "HarmonicWeight", h: float) -> "SmoothField":
        """
        The field exp(-phi / h) v for a harmonic weight phi.
        """

        def factor(points):
            return np.exp(-weight.value(points) / h)

        def value(points):
            return factor(points) * self.value(points)

        def gradient(points):
            grad_phi = weight.gradient(points)
            shifted = self.gradient(points)
            shifted = shifted - self.value(points)[..., None] * grad_phi / h
            return factor(points)[..., None] * shifted

        def laplacian(points):
            grad_phi = weight.gradient(points)
            cross = np.sum(grad_phi * self.gradient(points), axis=-1)
            square = np.sum(grad_phi**2, axis=-1)
            total = (
                self.laplacian(points)
                - 2 * cross / h
                + square * self.value(points) / h**2
            )
            return factor(points) * total

        return SmoothField(value, gradient, laplacian, f"damped_{self.name}")


@dataclass(frozen=True)
class HarmonicWeight:
    """
    A harmonic Carleman weight phi with its gradient.
    """

    name: str
    value: PointFunction
    gradient: PointFunction


def _re_z(points):
    return np.asarray(points)[..., 0]


def _re_z_gradient(points):
    gradient = np.zeros(np.shape(points))
    gradient[..., 0] = 1
    return gradient


def _re_z2(points):
    points = np.asarray(points)
    return points[..., 0] ** 2 - points[..., 1] ** 2


def _re_z2_gradient(points):
    points = np.asarray(points)
    return np.stack([2 * points[..., 0], -2 * points[..., 1]], axis=-1)


WEIGHTS = {
    "re_z": HarmonicWeight("re_z", _re_z, _re_z_gradient),
    "re_z2": HarmonicWeight("re_z2", _re_z2, _re_z2_gradient),
}


def random_fields(
    seed: int, count: int, max_frequency: float = 4.0
) -> list[SmoothField]:
    """
    A reproducible batch of band-limited random fields.
    """
    rng = np.random.default_rng(seed)
    fields = []
    for idx in range(count):
        name = f"random_{idx}"
        fields.append(SmoothField.random(rng, 6, max_frequency, name))

    return fields
