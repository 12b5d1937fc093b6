import logging
from typing import Callable, Union

import numpy as np

from fermi_forge.exceptions import NonSPDMetricError
from fermi_forge.geometry import Mesh, MetricFamily, evaluate_jets
from fermi_forge.pde_core import DEFAULT_N_MODES, DNMatrix, assemble_operator
from fermi_forge.pde_core import dn_matrix as assemble_dn

logger = logging.getLogger(__name__)

GAUGE_BOUNDARY_TOL = 1e-10

MetricLike = Union[None, MetricFamily, Callable[[np.ndarray], np.ndarray]]
ScalarLike = Union[float, Callable[[np.ndarray], np.ndarray]]


def _metric_values(points: np.ndarray, metric: MetricLike) -> np.ndarray:
    if metric is None:
        return np.broadcast_to(np.eye(2), points.shape[:-1] + (2, 2))

    if isinstance(metric, MetricFamily):
        return evaluate_jets(metric, points).g

    values = np.asarray(metric(points), dtype=float)
    det = values[..., 0, 0] * values[..., 1, 1] - values[..., 0, 1] ** 2

    if np.any(np.abs(values[..., 0, 1] - values[..., 1, 0]) > 1e-12):
        raise NonSPDMetricError("Metric evaluation is not symmetric.")

    if np.any(det <= 0) or np.any(values[..., 0, 0] <= 0):
        raise NonSPDMetricError("Metric evaluation is not positive definite.")

    return values


def _scalar_values(points: np.ndarray, value: ScalarLike) -> np.ndarray:
    if callable(value):
        return np.asarray(value(points), dtype=float)
    return np.full(points.shape[:-1], float(value))


def schrodinger_dn(
    mesh: Mesh,
    metric: MetricLike = None,
    q: ScalarLike = 0.0,
    n_modes: int = DEFAULT_N_MODES,
) -> DNMatrix:
    """
    DN map of the Schrodinger equation (Delta_g + q) v = 0, with the
    positive Laplace-Beltrami operator Delta_g. The conormal derivative is
    d g^{-1} grad v . nu with respect to Euclidean arc length, where
    d = det(g)^(1/2).

    Parameters
    ----------
    mesh
        The mesh.
    metric
        The metric: None for the Euclidean one, a MetricFamily (evaluated at
        s = 0) or a callable of points of shape (..., 2) returning the
        metric matrices.
    q
        The potential, a constant or a callable of points.
    n_modes
        Fourier truncation of the DN matrix.

    Raises
    ------
    NonSPDMetricError
        When the metric is not symmetric positive definite.
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of Delta_g + q.
    """
    G = _metric_values(mesh.quadrature_points, metric)
    A = np.linalg.inv(G)
    d = np.sqrt(np.linalg.det(G))
    potential = _scalar_values(mesh.quadrature_points, q)

    op = assemble_operator(mesh, A=A, d=d, q=potential, at_quadrature=True)
    return assemble_dn(op, n_modes, equation="schrodinger")


def gauge_defect(
    mesh: Mesh,
    c: Callable[[np.ndarray], np.ndarray],
    q: ScalarLike = 0.0,
    n_modes: int = DEFAULT_N_MODES,
) -> float:
    """
    Relative Frobenius distance between the DN maps of (I, q) and the gauge
    transformed pair (c I, q / c). Both continuous maps agree when c = 1 on
    the boundary, so the defect measures discretization error only.

    Raises
    ------
    ValueError
        When c differs from one on the boundary.
    """
    boundary = mesh.nodes[mesh.all_boundary_nodes]
    if np.max(np.abs(np.asarray(c(boundary)) - 1)) > GAUGE_BOUNDARY_TOL:
        raise ValueError("Gauge factor must equal one on the boundary.")

    def conformal(points):
        return c(points)[..., None, None] * np.eye(2)

    def gauged(points):
        base = q(points) if callable(q) else float(q)
        return base / c(points)

    first = schrodinger_dn(mesh, None, q, n_modes)
    second = schrodinger_dn(mesh, conformal, gauged, n_modes)

    defect = np.linalg.norm(first.matrix - second.matrix)
    defect /= np.linalg.norm(first.matrix)

    logger.info(f"Gauge defect at level {mesh.refinement_level}: {defect}.")
    return float(defect)


def swirl(
    points: np.ndarray, amplitude: float = 0.3
) -> tuple[np.ndarray, np.ndarray]:
    """
    Rotates each point of the unit disk by the angle amplitude (1 - |x|^2)^2.
    The map fixes the boundary pointwise.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        The images, shape (..., 2), and the Jacobians, shape (..., 2, 2).
    """
    points = np.asarray(points, dtype=float)
    bump = 1 - np.sum(points**2, axis=-1)
    angle = amplitude * bump**2
    cos, sin = np.cos(angle), np.sin(angle)

    rows = [np.stack([cos, -sin], axis=-1), np.stack([sin, cos], axis=-1)]
    rotation = np.stack(rows, axis=-2)
    images = np.einsum("...ij,...j->...i", rotation, points)

    # D(R(a) x) = R(a) (I + J x grad(a)^T) with J the quarter turn.
    grad = -4 * amplitude * bump[..., None] * points
    turned = np.stack([-points[..., 1], points[..., 0]], axis=-1)
    shear = np.eye(2) + turned[..., :, None] * grad[..., None, :]
    return images, rotation @ shear


Diffeomorphism = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def diffeomorphism_defect(
    mesh: Mesh,
    diffeomorphism: Diffeomorphism = swirl,
    metric: MetricLike = None,
    q: ScalarLike = 0.0,
    n_modes: int = DEFAULT_N_MODES,
) -> float:
    """
    Relative Frobenius distance between the DN maps of (g, q) and the
    pulled-back pair (phi^* g, q o phi), for a diffeomorphism phi of the
    disk that fixes the boundary pointwise. The continuous maps agree. The
    pulled-back coefficients change the discrete weak form, so unlike
    ``gauge_defect`` the defect is a discretization error that shrinks
    under refinement.

    Parameters
    ----------
    mesh
        The mesh.
    diffeomorphism
        Callable of points returning the images and the Jacobians.
    metric
        The base metric, as in ``schrodinger_dn``.
    q
        The base potential, a constant or a callable of points.
    n_modes
        Fourier truncation of the DN matrices.

    Raises
    ------
    ValueError
        When phi moves a boundary node.
    """
    boundary = mesh.nodes[mesh.all_boundary_nodes]
    images, _ = diffeomorphism(boundary)
    if np.max(np.abs(images - boundary)) > GAUGE_BOUNDARY_TOL:
        raise ValueError("The diffeomorphism must fix the boundary.")

    def pulled_metric(points):
        images, jacobian = diffeomorphism(points)
        base = _metric_values(images, metric)
        return np.einsum("...ki,...kl,...lj->...ij", jacobian, base, jacobian)

    def pulled_potential(points):
        images, _ = diffeomorphism(points)
        return _scalar_values(images, q)

    first = schrodinger_dn(mesh, metric, q, n_modes)
    second = schrodinger_dn(mesh, pulled_metric, pulled_potential, n_modes)

    defect = np.linalg.norm(first.matrix - second.matrix)
    defect /= np.linalg.norm(first.matrix)

    logger.info(
        f"Diffeomorphism defect at level {mesh.refinement_level}: {defect}."
    )
    return float(defect)
