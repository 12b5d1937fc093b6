import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import LinearOperator, SuperLU, norm, onenormest
from scipy.sparse.linalg import splu

from fermi_forge.exceptions import EigenvalueCollisionError

logger = logging.getLogger(__name__)

# Interior systems whose 1-norm condition estimate exceeds this threshold
# are treated as having 0 as a Dirichlet eigenvalue.
COLLISION_THRESHOLD = 1e12


@dataclass(frozen=True, eq=False)
class InteriorFactor:
    """
    Sparse LU factorization of a real interior system, shareable read-only
    between solves.
    """

    lu: SuperLU
    condition: float

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solves for one or more right-hand sides (columns). Complex
        right-hand sides are split into real and imaginary parts, which
        decouple for a real operator.
        """
        if not np.iscomplexobj(rhs):
            return self.lu.solve(np.asarray(rhs, dtype=float))

        if rhs.ndim == 1:
            sol = self.lu.solve(np.stack([rhs.real, rhs.imag], axis=1))
            return sol[:, 0] + 1j * sol[:, 1]

        n_cols = rhs.shape[1]
        sol = self.lu.solve(np.concatenate([rhs.real, rhs.imag], axis=1))
        return sol[:, :n_cols] + 1j * sol[:, n_cols:]


def factorize(matrix) -> InteriorFactor:
    """
    Factorizes a square sparse matrix and estimates its 1-norm condition
    number.

    Raises
    ------
    EigenvalueCollisionError
        When the factorization fails or the condition estimate exceeds
        ``COLLISION_THRESHOLD``.
    """
    matrix = csc_matrix(matrix)

    if matrix.shape[0] == 0:
        msg = "Interior system is empty; the mesh has no interior nodes."
        raise EigenvalueCollisionError(msg)

    try:
        lu = splu(matrix)
    except RuntimeError as err:
        msg = "Eigenvalue collision: interior system is singular."
        raise EigenvalueCollisionError(msg) from err

    inverse = LinearOperator(
        matrix.shape,
        matvec=lu.solve,
        rmatvec=lambda x: lu.solve(x, trans="T"),
        dtype=float,
    )

    with np.errstate(all="ignore"):
        condition = norm(matrix, 1) * onenormest(inverse)

    if not np.isfinite(condition) or condition > COLLISION_THRESHOLD:
        msg = (
            f"Eigenvalue collision: condition estimate {condition:.3e} "
            f"exceeds {COLLISION_THRESHOLD:.0e}."
        )
        raise EigenvalueCollisionError(msg)

    n_unknowns = matrix.shape[0]
    logger.debug(f"Factorized {n_unknowns} unknowns, cond {condition:.2e}.")
    return InteriorFactor(lu, float(condition))
