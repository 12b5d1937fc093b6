from dataclasses import dataclass
from numbers import Number
from typing import Callable, Optional

import numpy as np
from scipy import fft

from fermi_forge.geometry import Domain, Mesh

DEFAULT_N_MODES = 32


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """
    A function on the domain boundary, stored per boundary circle as
    truncated Fourier coefficients c_n, |n| <= N, in the polar angle:
    f(theta) = sum_n c_n e^{i n theta}.

    Parameters
    ----------
    domain
        The domain whose boundary circles carry the function.
    coefficients
        Complex array of shape (n_components, 2N + 1); column n + N holds
        c_n.
    """

    domain: Domain
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        n_components = len(self.domain.boundary_components)

        if coeffs.ndim != 2 or coeffs.shape[0] != n_components:
            msg = f"Expected coefficients for {n_components} components."
            raise ValueError(msg)

        if coeffs.shape[1] % 2 != 1:
            raise ValueError("Coefficient rows must have odd length 2N + 1.")

        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_modes(self) -> int:
        return self.coefficients.shape[1] // 2

    @property
    def n_components(self) -> int:
        return self.coefficients.shape[0]

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.n_modes, self.n_modes + 1)

    def mode(self, n: int, component: int = 0) -> complex:
        return complex(self.coefficients[component, n + self.n_modes])

    def is_real(self, tol: float = 1e-12) -> bool:
        """
        True iff c_{-n} = conj(c_n) on every component.
        """
        diff = self.coefficients - self.coefficients[:, ::-1].conj()
        scale = max(1.0, np.abs(self.coefficients).max(initial=0))
        return bool(np.abs(diff).max(initial=0) <= tol * scale)

    def evaluate(self, component: int, angles: np.ndarray) -> np.ndarray:
        phases = np.exp(1j * np.outer(np.asarray(angles), self.modes))
        return phases @ self.coefficients[component]

    def sample(self, mesh: Mesh) -> np.ndarray:
        """
        Samples the function at the boundary nodes of the mesh, using the
        exact node angles. Interior entries are zero; the result is real
        when the function is real.
        """
        values = np.zeros(mesh.n_nodes, dtype=complex)

        for comp, nodes in enumerate(mesh.boundary_nodes):
            values[nodes] = self.evaluate(comp, mesh.boundary_angles(comp))

        return values.real if self.is_real() else values

    def tangential_derivative(self) -> "BoundaryFunction":
        """
        Derivative along the unit tangent in traversal direction.
        """
        factors = [
            circle.orientation * 1j * self.modes / circle.radius
            for circle in self.domain.boundary_components
        ]
        return self._new(self.coefficients * np.array(factors))

    def conj(self) -> "BoundaryFunction":
        return self._new(self.coefficients[:, ::-1].conj())

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def h1_norm(self) -> float:
        weights = 1 + self.modes**2
        return float(np.sqrt(np.sum(weights * np.abs(self.coefficients) ** 2)))

    def pairing(self, other: "BoundaryFunction") -> complex:
        """
        Bilinear boundary integral of f g with respect to arc length.
        """
        total = 0j
        for comp, circle in enumerate(self.domain.boundary_components):
            prod = self.coefficients[comp] @ other.coefficients[comp, ::-1]
            total += 2 * np.pi * circle.radius * prod

        return total

    def stacked(self) -> np.ndarray:
        return self.coefficients.ravel()

    def with_modes(self, n_modes: int) -> "BoundaryFunction":
        """
        Truncates or zero-pads the coefficients to |n| <= n_modes.
        """
        coeffs = np.zeros((self.n_components, 2 * n_modes + 1), complex)
        keep = min(n_modes, self.n_modes)
        coeffs[:, n_modes - keep : n_modes + keep + 1] = self.coefficients[
            :, self.n_modes - keep : self.n_modes + keep + 1
        ]
        return self._new(coeffs)

    def _new(self, coefficients: np.ndarray) -> "BoundaryFunction":
        return BoundaryFunction(self.domain, coefficients)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, BoundaryFunction):
            return other.with_modes(self.n_modes).coefficients
        return NotImplemented

    def __add__(self, other):
        coeffs = self._coerce(other)
        if coeffs is NotImplemented:
            return NotImplemented
        return self._new(self.coefficients + coeffs)

    def __sub__(self, other):
        coeffs = self._coerce(other)
        if coeffs is NotImplemented:
            return NotImplemented
        return self._new(self.coefficients - coeffs)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return self._new(scalar * self.coefficients)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return self._new(self.coefficients / scalar)

    def __neg__(self):
        return self._new(-self.coefficients)

    @classmethod
    def zeros(
        cls, domain: Domain, n_modes: int = DEFAULT_N_MODES
    ) -> "BoundaryFunction":
        n_components = len(domain.boundary_components)
        return cls(domain, np.zeros((n_components, 2 * n_modes + 1)))

    @classmethod
    def from_mode(
        cls,
        domain: Domain,
        n: int,
        component: int = 0,
        amplitude: complex = 1.0,
        n_modes: int = DEFAULT_N_MODES,
    ) -> "BoundaryFunction":
        """
        Returns amplitude * e^{i n theta} on one boundary component and zero
        on the others.
        """
        if abs(n) > n_modes:
            raise ValueError(f"Mode {n} exceeds truncation {n_modes}.")

        func = cls.zeros(domain, n_modes)
        func.coefficients[component, n + n_modes] = amplitude
        return func

    @classmethod
    def trigonometric(
        cls,
        domain: Domain,
        n: int,
        amplitude: float = 1.0,
        kind: str = "cos",
        component: int = 0,
        n_modes: int = DEFAULT_N_MODES,
    ) -> "BoundaryFunction":
        """
        Returns the real function amplitude * cos(n theta) or
        amplitude * sin(n theta) on one boundary component.
        """
        plus = cls.from_mode(domain, n, component, 0.5, n_modes)
        minus = cls.from_mode(domain, -n, component, 0.5, n_modes)

        if kind == "cos":
            return amplitude * (plus + minus)
        if kind == "sin":
            return (-1j * amplitude) * (plus - minus)

        raise ValueError(f"Unknown trigonometric kind {kind!r}.")

    @classmethod
    def from_callable(
        cls,
        domain: Domain,
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        n_modes: int = DEFAULT_N_MODES,
    ) -> "BoundaryFunction":
        """
        Projects func(x, y), evaluated on each boundary circle, onto the
        truncated Fourier basis by FFT.
        """
        n_samples = max(4 * n_modes + 4, 64)
        angles = 2 * np.pi * np.arange(n_samples) / n_samples
        modes = np.arange(-n_modes, n_modes + 1)
        rows = []

        for circle in domain.boundary_components:
            x = circle.radius * np.cos(angles)
            y = circle.radius * np.sin(angles)
            values = np.broadcast_to(func(x, y), angles.shape)
            spectrum = fft.fft(values) / n_samples
            rows.append(spectrum[modes % n_samples])

        return cls(domain, np.array(rows))

    @classmethod
    def from_nodal(
        cls, mesh: Mesh, values: np.ndarray, n_modes: int = DEFAULT_N_MODES
    ) -> "BoundaryFunction":
        """
        Fourier coefficients of nodal boundary values by the trapezoidal
        rule. Assumes equispaced boundary nodes, as built by ``build_mesh``.
        """
        modes = np.arange(-n_modes, n_modes + 1)
        rows = []

        for comp, nodes in enumerate(mesh.boundary_nodes):
            angles = mesh.boundary_angles(comp)
            phases = np.exp(-1j * np.outer(modes, angles))
            rows.append(phases @ values[nodes] / len(nodes))

        return cls(mesh.domain, np.array(rows))

    @classmethod
    def from_functional(
        cls,
        mesh: Mesh,
        functional: np.ndarray,
        n_modes: int = DEFAULT_N_MODES,
        density: Optional[np.ndarray] = None,
    ) -> "BoundaryFunction":
        """
        Recovers the function lam from its nodal boundary functional
        F_i = int lam phi_i dS, where dS = density * ds. The density defaults
        to 1, i.e., Euclidean arc length.
        """
        modes = np.arange(-n_modes, n_modes + 1)
        density = np.ones(mesh.n_nodes) if density is None else density
        rows = []

        for comp, nodes in enumerate(mesh.boundary_nodes):
            radius = mesh.domain.boundary_components[comp].radius
            angles = mesh.boundary_angles(comp)
            phases = np.exp(-1j * np.outer(modes, angles))
            weights = functional[nodes] / density[nodes]
            rows.append(phases @ weights / (2 * np.pi * radius))

        return cls(mesh.domain, np.array(rows))
