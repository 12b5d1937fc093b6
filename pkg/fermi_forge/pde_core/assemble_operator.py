from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from fermi_forge.exceptions import DegenerateMeshError
from fermi_forge.geometry import Mesh
from fermi_forge.geometry.mesh import EDGE_MIDPOINT_BASIS

from .factorization import InteriorFactor, factorize
from .quadrature import to_quadrature


@dataclass(frozen=True, eq=False)
class EllipticOperator:
    """
    Discretization of u -> -d^{-1} div(A d grad u) + q u with P1 finite
    elements, in the weak form int d (A grad u) . grad phi + int d q u phi.

    Parameters
    ----------
    mesh
        The mesh the operator lives on.
    stiffness
        Sparse principal-part matrix.
    mass
        Sparse potential matrix, i.e., the d q weighted mass matrix.
    conormal_tensor
        Per-triangle averaged d A, shape (n_triangles, 2, 2), used by
        flux computations.
    weight
        The weight d at the quadrature points, shape (n_triangles, 3).
    """

    mesh: Mesh
    stiffness: csr_matrix
    mass: csr_matrix
    conormal_tensor: np.ndarray
    weight: np.ndarray

    @cached_property
    def matrix(self) -> csr_matrix:
        return (self.stiffness + self.mass).tocsr()

    @cached_property
    def interior_matrix(self) -> csr_matrix:
        interior = self.mesh.interior_nodes
        return self.matrix[interior][:, interior]

    @cached_property
    def interior_factor(self) -> InteriorFactor:
        """
        Factorization of the interior block. Raises EigenvalueCollisionError
        when 0 is numerically a Dirichlet eigenvalue.
        """
        return factorize(self.interior_matrix)

    def apply(self, u: np.ndarray) -> np.ndarray:
        """
        Returns the nodal functional phi_i -> a(u, phi_i).
        """
        return self.matrix @ u


def assemble_operator(
    mesh: Mesh,
    A: Optional[np.ndarray] = None,
    d: Optional[np.ndarray] = None,
    q: Optional[np.ndarray] = None,
    at_quadrature: bool = False,
) -> EllipticOperator:
    """
    Assembles the weighted elliptic operator on the mesh.

    Parameters
    ----------
    mesh
        The mesh.
    A
        Principal tensor, nodal shape (n_nodes, 2, 2). Defaults to the
        identity.
    d
        Positive weight, nodal shape (n_nodes,). Defaults to 1.
    q
        Potential, nodal shape (n_nodes,). Defaults to 0.
    at_quadrature
        If True, the coefficients are given at the quadrature points instead,
        with shapes (n_triangles, 3, 2, 2) and (n_triangles, 3).

    Returns
    -------
    EllipticOperator
        The assembled operator.

    Raises
    ------
    DegenerateMeshError
        When the weight is not positive at some quadrature point.
    """
    shape = (mesh.n_triangles, 3)

    def coefficient(value, default):
        if value is None:
            return np.broadcast_to(default, shape + np.shape(default))
        if at_quadrature:
            return np.asarray(value)
        return to_quadrature(mesh, value)

    A_q = coefficient(A, np.eye(2))
    d_q = coefficient(d, 1.0)
    q_q = coefficient(q, 0.0)

    if np.any(~np.isfinite(d_q)) or np.any(d_q <= 0):
        raise DegenerateMeshError("Operator weight must be positive.")

    return assemble_form(
        mesh,
        tensor=d_q[..., None, None] * A_q,
        scalar=d_q * q_q,
        weight=d_q,
    )


def assemble_form(
    mesh: Mesh,
    tensor: np.ndarray,
    scalar: Optional[np.ndarray] = None,
    vector: Optional[np.ndarray] = None,
    weight: Optional[np.ndarray] = None,
) -> EllipticOperator:
    """
    Assembles the symmetric bilinear form

        int (M grad u) . grad phi + c u phi
            + int (b . grad u) phi + u (b . grad phi)

    with coefficients M, c and b given at the quadrature points, shapes
    (n_triangles, 3, 2, 2), (n_triangles, 3) and (n_triangles, 3, 2).
    """
    areas = mesh.areas
    grads = mesh.basis_gradients
    basis = EDGE_MIDPOINT_BASIS

    conormal = np.mean(tensor, axis=1)
    local_stiffness = np.einsum(
        "t,tai,tij,tbj->tab", areas, grads, conormal, grads
    )

    if vector is not None:
        weighted = (areas / 3)[:, None, None] * vector
        cross = np.einsum("tqi,qa,tbi->tab", weighted, basis, grads)
        local_stiffness = local_stiffness + cross + cross.transpose(0, 2, 1)

    if scalar is None:
        scalar = np.zeros((mesh.n_triangles, 3))

    potential = (areas / 3)[:, None] * scalar
    local_mass = np.einsum("tq,qa,qb->tab", potential, basis, basis)

    if weight is None:
        weight = np.ones((mesh.n_triangles, 3))

    return EllipticOperator(
        mesh=mesh,
        stiffness=_to_sparse(mesh, local_stiffness),
        mass=_to_sparse(mesh, local_mass),
        conormal_tensor=conormal,
        weight=np.array(weight, dtype=float),
    )


def _to_sparse(mesh: Mesh, local: np.ndarray) -> csr_matrix:
    """
    Sums local 3x3 element matrices into a global sparse matrix.
    """
    tri = mesh.triangles
    rows = np.broadcast_to(tri[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(tri[:, None, :], local.shape).ravel()
    shape = (mesh.n_nodes, mesh.n_nodes)
    return coo_matrix((local.ravel(), (rows, cols)), shape=shape).tocsr()
