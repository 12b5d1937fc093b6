from dataclasses import dataclass, field

import numpy as np

from fermi_forge.geometry import Domain

from .assemble_operator import EllipticOperator
from .boundary_function import DEFAULT_N_MODES, BoundaryFunction


@dataclass(frozen=True, eq=False)
class DNMatrix:
    """
    Dirichlet-to-Neumann map as a dense matrix on the stacked boundary
    Fourier basis: component-major, modes -N..N within each component.
    """

    matrix: np.ndarray
    domain: Domain
    n_modes: int
    metadata: dict = field(default_factory=dict)

    def apply(self, f: BoundaryFunction) -> BoundaryFunction:
        coeffs = self.matrix @ f.with_modes(self.n_modes).stacked()
        shape = (len(self.domain.boundary_components), 2 * self.n_modes + 1)
        return BoundaryFunction(self.domain, coeffs.reshape(shape))

    def entry(self, n: int, m: int, row_comp: int = 0, col_comp: int = 0):
        """
        Coefficient of mode n on row_comp of the image of e^{i m theta} on
        col_comp.
        """
        width = 2 * self.n_modes + 1
        row = row_comp * width + n + self.n_modes
        col = col_comp * width + m + self.n_modes
        return complex(self.matrix[row, col])

    def quadratic_form(self, f: BoundaryFunction) -> complex:
        """
        Boundary integral of (Lambda f) times conj(f).
        """
        return self.apply(f).pairing(f.conj())

    def hermitian_defect(self) -> float:
        """
        Relative defect of the symmetry of the bilinear form
        (f, g) -> int (Lambda f) g dS, measured in the orthonormal boundary
        basis. Zero for an exact self-adjoint DN map.
        """
        weights = np.concatenate(
            [
                np.full(2 * self.n_modes + 1, 2 * np.pi * circle.radius)
                for circle in self.domain.boundary_components
            ]
        )
        scaled = np.sqrt(weights)[:, None] * self.matrix / np.sqrt(weights)
        sym = scaled - scaled.conj().T
        return float(np.linalg.norm(sym) / np.linalg.norm(scaled))


def dn_matrix(
    op: EllipticOperator, n_modes: int = DEFAULT_N_MODES, **metadata
) -> DNMatrix:
    """
    Assembles the DN matrix column by column: each column is the conormal
    trace of the Dirichlet solution with a single Fourier mode as boundary
    data. All columns share one interior factorization.

    Parameters
    ----------
    op
        The operator.
    n_modes
        Fourier truncation N; the matrix has size C(2N + 1) for C boundary
        components.
    metadata
        Extra entries stored with the matrix, e.g. coefficient names.

    Returns
    -------
    DNMatrix
        The discrete DN map.
    """
    mesh = op.mesh
    modes = np.arange(-n_modes, n_modes + 1)
    interior = mesh.interior_nodes
    blocks = []

    for comp, nodes in enumerate(mesh.boundary_nodes):
        angles = mesh.boundary_angles(comp)
        block = np.zeros((mesh.n_nodes, len(modes)), dtype=complex)
        block[nodes] = np.exp(1j * np.outer(angles, modes))
        blocks.append(block)

    data = np.hstack(blocks)
    rhs = -(op.matrix @ data)[interior]
    data[interior] = op.interior_factor.solve(rhs)
    flux = op.matrix @ data

    rows = []
    for comp, nodes in enumerate(mesh.boundary_nodes):
        radius = mesh.domain.boundary_components[comp].radius
        angles = mesh.boundary_angles(comp)
        phases = np.exp(-1j * np.outer(modes, angles))
        rows.append(phases @ flux[nodes] / (2 * np.pi * radius))

    metadata.setdefault("level", mesh.refinement_level)
    return DNMatrix(np.vstack(rows), mesh.domain, n_modes, metadata)
