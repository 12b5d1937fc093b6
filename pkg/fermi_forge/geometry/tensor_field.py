from dataclasses import dataclass
from typing import Optional

import numpy as np

TRACE_FREE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TensorField2:
    """
    A symmetric 2x2 tensor field K per point, with the complex scalar
    kappa = K11 - K22 + i(K12 + K21) that satisfies
    K(du, dv) = kappa du dv for the holomorphic derivative d.

    Parameters
    ----------
    values
        Tensor values of shape (..., 2, 2).
    trace_free
        Whether Tr(gK) = 0 is required at every point.
    metric
        The metric g used for the trace. Defaults to the identity.
    """

    values: np.ndarray
    trace_free: bool = False
    metric: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values)
        scale = 1 + np.max(np.abs(values), initial=0)

        asym = np.abs(values[..., 0, 1] - values[..., 1, 0])
        if np.any(asym > 1e-12 * scale):
            raise ValueError("Tensor field is not symmetric.")

        if self.trace_free and self.trace_residual > TRACE_FREE_TOL * scale:
            msg = f"Tensor field is not trace-free: {self.trace_residual:.2e}."
            raise ValueError(msg)

    @property
    def trace_residual(self) -> float:
        g = np.eye(2) if self.metric is None else self.metric
        trace = np.trace(g @ self.values, axis1=-2, axis2=-1)
        return float(np.max(np.abs(trace), initial=0))

    @property
    def kappa(self) -> np.ndarray:
        K = self.values
        return K[..., 0, 0] - K[..., 1, 1] + 1j * (K[..., 0, 1] + K[..., 1, 0])

    def bilinear(self, grad_u: np.ndarray, grad_v: np.ndarray) -> np.ndarray:
        """
        K(grad u, grad v) without conjugation, for real or complex gradients
        of shape (..., 2).
        """
        return np.einsum("...i,...ij,...j->...", grad_u, self.values, grad_v)


def diagonal_tensor(mu: np.ndarray) -> TensorField2:
    """
    K = diag(mu, -mu), with kappa = 2 mu.
    """
    mu = np.asarray(mu, dtype=float)
    values = np.zeros(mu.shape + (2, 2))
    values[..., 0, 0] = mu
    values[..., 1, 1] = -mu
    return TensorField2(values, trace_free=True)


def offdiagonal_tensor(tau: np.ndarray) -> TensorField2:
    """
    K = [[0, tau], [tau, 0]], with kappa = 2i tau.
    """
    tau = np.asarray(tau, dtype=float)
    values = np.zeros(tau.shape + (2, 2))
    values[..., 0, 1] = tau
    values[..., 1, 0] = tau
    return TensorField2(values, trace_free=True)
