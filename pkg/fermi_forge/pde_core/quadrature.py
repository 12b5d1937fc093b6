"""
P1 quadrature helpers. Integrals over triangles use the three-point
edge-midpoint rule, which is exact for quadratic polynomials, so P1 mass
matrices with constant coefficients are assembled exactly.
"""
from dataclasses import dataclass

import numpy as np

from fermi_forge.geometry import Mesh
from fermi_forge.geometry.mesh import EDGE_MIDPOINT_BASIS


def to_quadrature(mesh: Mesh, nodal: np.ndarray) -> np.ndarray:
    """
    Interpolates nodal values of shape (n_nodes, ...) to the edge midpoints,
    returning shape (n_triangles, 3, ...).
    """
    local = np.asarray(nodal)[mesh.triangles]
    return np.einsum("qa,ta...->tq...", EDGE_MIDPOINT_BASIS, local)


def gradient(mesh: Mesh, nodal: np.ndarray) -> np.ndarray:
    """
    Piecewise-constant gradient of a nodal P1 field, shape (n_triangles, 2).
    """
    local = np.asarray(nodal)[mesh.triangles]
    return np.einsum("tai,ta->ti", mesh.basis_gradients, local)


def integrate(mesh: Mesh, values: np.ndarray) -> complex:
    """
    Integrates values given at the quadrature points, shape
    (n_triangles, 3).
    """
    total = np.sum(mesh.areas[:, None] * values) / 3
    return total if np.iscomplexobj(total) else float(total)


def load_vector(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """
    Returns the nodal functional phi_i -> int f phi_i for f given at the
    quadrature points, shape (n_triangles, 3).
    """
    weighted = (mesh.areas / 3)[:, None] * values
    local = np.einsum("tq,qa->ta", weighted, EDGE_MIDPOINT_BASIS)
    return scatter(mesh, local)


def flux_load_vector(mesh: Mesh, flux: np.ndarray) -> np.ndarray:
    """
    Returns the nodal functional phi_i -> int F . grad phi_i for a vector
    field F given at the quadrature points, shape (n_triangles, 3, 2).
    """
    mean_flux = flux.mean(axis=1) * mesh.areas[:, None]
    local = np.einsum("ti,tai->ta", mean_flux, mesh.basis_gradients)
    return scatter(mesh, local)


def scatter(mesh: Mesh, local: np.ndarray) -> np.ndarray:
    """
    Sums per-triangle vertex contributions of shape (n_triangles, 3) into a
    nodal vector.
    """
    idcs = mesh.triangles.ravel()

    if np.iscomplexobj(local):
        real = np.bincount(idcs, local.real.ravel(), minlength=mesh.n_nodes)
        imag = np.bincount(idcs, local.imag.ravel(), minlength=mesh.n_nodes)
        return real + 1j * imag

    return np.bincount(idcs, local.ravel(), minlength=mesh.n_nodes)


def bilinear(A: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    A(u, v) = u . A v for stacks of 2x2 tensors and 2-vectors, without
    complex conjugation.
    """
    return np.einsum("...i,...ij,...j->...", u, A, v)


@dataclass(frozen=True)
class BoundaryFrame:
    """
    Node-based frame on the boundary circles, concatenated in component
    order.

    Parameters
    ----------
    nodes
        Boundary node indices.
    normals
        Outward Euclidean unit normals at the nodes, shape (n, 2).
    tangents
        Unit tangents, the normals rotated counterclockwise, shape (n, 2).
    spacing
        Arc length 2 pi r / n_r per node of a circle with n_r nodes.
    previous
        The preceding boundary node along the circle.
    following
        The following boundary node along the circle.
    steps
        Tangential component of the secant from ``previous`` to
        ``following``.
    """

    nodes: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray
    spacing: np.ndarray
    previous: np.ndarray
    following: np.ndarray
    steps: np.ndarray

    def tangential(self, nodal: np.ndarray) -> np.ndarray:
        """
        Centered difference of nodal values along the tangent, which is
        second-order accurate on equispaced boundary nodes.
        """
        nodal = np.asarray(nodal)
        return (nodal[self.following] - nodal[self.previous]) / self.steps

    def density(self, functional: np.ndarray) -> np.ndarray:
        """
        Nodal density lam_i of a boundary functional F_i = int lam phi_i ds.
        """
        return np.asarray(functional)[self.nodes] / self.spacing


def boundary_frame(mesh: Mesh) -> BoundaryFrame:
    nodes, normals, spacing, previous, following = [], [], [], [], []

    for comp, edges in enumerate(mesh.boundary_edges):
        ring = mesh.boundary_nodes[comp]
        radius = mesh.domain.boundary_components[comp].radius

        # Node i sits between edges i - 1 and i.
        normal = edges.normals + np.roll(edges.normals, 1, axis=0)
        normal /= np.linalg.norm(normal, axis=1)[:, None]

        nodes.append(ring)
        normals.append(normal)
        spacing.append(np.full(len(ring), 2 * np.pi * radius / len(ring)))
        previous.append(np.roll(ring, 1))
        following.append(np.roll(ring, -1))

    normals = np.concatenate(normals)
    tangents = np.stack([-normals[:, 1], normals[:, 0]], axis=1)
    previous = np.concatenate(previous)
    following = np.concatenate(following)
    secant = mesh.nodes[following] - mesh.nodes[previous]

    return BoundaryFrame(
        nodes=np.concatenate(nodes),
        normals=normals,
        tangents=tangents,
        spacing=np.concatenate(spacing),
        previous=previous,
        following=following,
        steps=np.einsum("ni,ni->n", secant, tangents),
    )
