from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from fermi_forge.exceptions import NonSPDMetricError

from .mesh import Mesh
from .metric_family import MetricFamily

TENSOR_JETS = ("g", "k", "k1", "k2", "k3")


@dataclass(frozen=True)
class MetricJets:
    """
    s-jets of a metric family at a set of points, with the notation
    k = g^{-1}, k_n = d^n k / ds^n, h = Tr(g^{-1} dg/ds), h_n = d^n h / ds^n,
    d = det(g)^{1/2} and d_n = d^n d / ds^n. Tensor entries have shape
    (..., 2, 2) and scalar entries shape (...).
    """

    g: np.ndarray
    k: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    h: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray
    d: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    d4: np.ndarray

    def reshape(self, shape: tuple[int, ...]) -> "MetricJets":
        """
        Reshapes the leading (point) axes of every entry.
        """
        data = {}
        for item in fields(self):
            value = getattr(self, item.name)
            tail = (2, 2) if item.name in TENSOR_JETS else ()
            data[item.name] = value.reshape(shape + tail)

        return MetricJets(**data)


def jets_from_derivatives(derivs: np.ndarray) -> MetricJets:
    """
    Computes the jets from g and its first four s-derivatives, given as an
    array of shape (5, N, 2, 2).
    """
    G0, G1, G2, G3, G4 = derivs
    _check_spd(G0)

    K = np.linalg.inv(G0)
    K1 = -K @ G1 @ K
    K2 = -(K1 @ G1 @ K + K @ G2 @ K + K @ G1 @ K1)
    K3 = -(
        K2 @ G1 @ K
        + 2 * K1 @ G2 @ K
        + 2 * K1 @ G1 @ K1
        + K @ G3 @ K
        + 2 * K @ G2 @ K1
        + K @ G1 @ K2
    )

    def trace(a):
        return np.trace(a, axis1=-2, axis2=-1)

    h = trace(K @ G1)
    h1 = trace(K1 @ G1 + K @ G2)
    h2 = trace(K2 @ G1 + 2 * K1 @ G2 + K @ G3)
    h3 = trace(K3 @ G1 + 3 * K2 @ G2 + 3 * K1 @ G3 + K @ G4)

    d = np.sqrt(np.linalg.det(G0))
    d1 = 0.5 * d * h
    d2 = 0.5 * (d1 * h + d * h1)
    d3 = 0.5 * (d2 * h + 2 * d1 * h1 + d * h2)
    d4 = 0.5 * (d3 * h + 3 * d2 * h1 + 3 * d1 * h2 + d * h3)

    return MetricJets(
        g=G0, k=K, k1=K1, k2=K2, k3=K3,
        h=h, h1=h1, h2=h2, h3=h3,
        d=d, d1=d1, d2=d2, d3=d3, d4=d4,
    )  # fmt: skip


def evaluate_jets(
    family: MetricFamily,
    points: np.ndarray,
    s: Union[float, np.ndarray] = 0.0,
) -> MetricJets:
    """
    Evaluates the jets of ``family`` at points of shape (..., 2), with s a
    scalar or an array matching the leading point axes.
    """
    points = np.asarray(points, dtype=float)
    shape = points.shape[:-1]
    flat = points.reshape(-1, 2)
    s = np.broadcast_to(np.asarray(s, dtype=float), shape).reshape(-1)

    jets = jets_from_derivatives(family.s_derivatives(flat, s, order=4))
    return jets.reshape(shape)


def metric_jets(
    family: MetricFamily, mesh: Mesh, at: str = "nodes"
) -> MetricJets:
    """
    Returns the s = 0 jets of the family on the mesh.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    at
        "nodes" for per-node jets of shape (n_nodes, ...), or "quadrature"
        for jets at the edge-midpoint quadrature points, shape
        (n_triangles, 3, ...).

    Returns
    -------
    MetricJets
        The jets. Closed-form families return their exact derivatives.
    """
    if at == "nodes":
        return evaluate_jets(family, mesh.nodes)
    elif at == "quadrature":
        return evaluate_jets(family, mesh.quadrature_points)

    raise ValueError(f"Unknown jet location {at!r}.")


def _check_spd(G: np.ndarray):
    asym = np.abs(G[..., 0, 1] - G[..., 1, 0])
    det = G[..., 0, 0] * G[..., 1, 1] - G[..., 0, 1] * G[..., 1, 0]

    if np.any(asym > 1e-12 * (1 + np.abs(G[..., 0, 1]))):
        raise NonSPDMetricError("Metric evaluation is not symmetric.")

    if np.any(det <= 0) or np.any(G[..., 0, 0] <= 0):
        raise NonSPDMetricError("Metric evaluation is not positive definite.")
