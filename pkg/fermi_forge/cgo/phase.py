from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

CRITICAL_TOL = 1e-10
Z0_MARGIN = 0.1
DEFAULT_LAMBDA = 0.2


@dataclass(frozen=True)
class Phase:
    """
    A holomorphic polynomial phase P(z), or the antiholomorphic phase
    conj(P(z)) when ``antiholomorphic`` is set. The oscillating part is
    psi = Im of the phase value.

    Parameters
    ----------
    coefficients
        Complex coefficients of P in increasing degree.
    antiholomorphic
        Whether the phase is conj(P).
    name
        Label used in tables.
    """

    coefficients: tuple
    antiholomorphic: bool = False
    name: str = ""

    def __post_init__(self):
        coefficients = tuple(complex(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(np.array(self.coefficients))

    def value(self, z: np.ndarray) -> np.ndarray:
        value = self.polynomial(z)
        return np.conj(value) if self.antiholomorphic else value

    def psi(self, z: np.ndarray) -> np.ndarray:
        return np.imag(self.value(z))

    def derivative(self, z: np.ndarray) -> np.ndarray:
        """
        P'(z), the complex derivative of the holomorphic part.
        """
        return self.polynomial.deriv()(np.asarray(z, dtype=complex))

    def dbar_psi(self, z: np.ndarray) -> np.ndarray:
        """
        The antiholomorphic derivative of psi: i conj(P') / 2 for a
        holomorphic phase and its negative for an antiholomorphic one.
        """
        value = 0.5j * np.conj(self.derivative(z))
        return -value if self.antiholomorphic else value

    def holomorphic_part(self) -> "Phase":
        return Phase(self.coefficients, False, self.name)

    def critical_points(self, radius: float = 1.0) -> list[complex]:
        """
        Roots of P' in the closed disk of the given radius, by companion
        matrix eigenvalues, each verified by evaluating |P'|.
        """
        derivative = self.polynomial.deriv()
        if derivative.degree() < 1:
            return []

        scale = max(1.0, float(np.max(np.abs(derivative.coef))))
        points = []
        for root in derivative.roots():
            if abs(root) > radius + CRITICAL_TOL:
                continue

            if abs(derivative(root)) > 1e3 * CRITICAL_TOL * scale:
                continue

            points.append(complex(root))

        return points

    @property
    def morse_flag(self) -> bool:
        """
        True iff P'' is nonzero at every critical point in the unit disk.
        """
        second = self.polynomial.deriv(2)
        return all(
            abs(second(point)) > CRITICAL_TOL
            for point in self.critical_points()
        )


def polynomial_phase(
    coefficients: Sequence[complex], antiholomorphic=False, name=""
) -> Phase:
    return Phase(tuple(coefficients), antiholomorphic, name)


def phase_catalog(
    z0: complex = 0j,
    lam: float = DEFAULT_LAMBDA,
    diameter: float = 2.0,
) -> dict[str, Phase]:
    """
    The phases used with the integral identities, built from
    Psi = z - z0, which has no critical points, and the Morse phase
    Phi = lam (z - z0)^2 with its single critical point at z0.

    The second-order set is theta1 = Psi + Phi, theta2 = -Psi + Phi and the
    antiholomorphic theta3 = -2 conj(Phi); their sum is 4i Im(Phi). The
    third-order set is phi1 = theta1, phi3 = theta2 and the antiholomorphic
    phases phi2 = -conj(theta1) and phi4 = -conj(theta2).

    Parameters
    ----------
    z0
        The critical point, at least Z0_MARGIN inside the unit circle.
    lam
        Positive scale of Phi, below 1 / (2 diameter) so that
        |Psi' +- Phi'| >= 1 - 2 lam diameter > 0 on the domain.
    diameter
        Diameter of the domain.

    Returns
    -------
    dict[str, Phase]
        Phases keyed by "psi", "phi", "theta1", "theta2", "theta3", "phi1",
        "phi2", "phi3" and "phi4".
    """
    z0 = complex(z0)

    if abs(z0) > 1 - Z0_MARGIN:
        msg = f"z0 = {z0} is closer than {Z0_MARGIN} to the boundary."
        raise ValueError(msg)

    if not 0 < lam < 1 / (2 * diameter):
        msg = f"lam = {lam} must lie in (0, {1 / (2 * diameter)})."
        raise ValueError(msg)

    psi = Polynomial([-z0, 1])
    phi = lam * Polynomial([-z0, 1]) ** 2
    theta1 = psi + phi
    theta2 = -psi + phi

    def make(poly, name, antiholomorphic=False):
        return Phase(tuple(poly.coef), antiholomorphic, name)

    return {
        "psi": make(psi, "psi"),
        "phi": make(phi, "phi"),
        "theta1": make(theta1, "theta1"),
        "theta2": make(theta2, "theta2"),
        "theta3": make(-2 * phi, "theta3", antiholomorphic=True),
        "phi1": make(theta1, "phi1"),
        "phi2": make(-theta1, "phi2", antiholomorphic=True),
        "phi3": make(theta2, "phi3"),
        "phi4": make(-theta2, "phi4", antiholomorphic=True),
    }
