import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from fermi_forge.geometry import Mesh, MetricFamily
from fermi_forge.parallel import parallel_map
from fermi_forge.pde_core import BoundaryFunction, EllipticOperator

from .first_linearized_operator import first_linearized_operator
from .forms import FormCoefficients, form_coefficients
from .solve_first_lin import solve_first_lin
from .solve_second_lin import solve_second_lin
from .solve_third_lin import solve_third_lin

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LinearizationBundle:
    """
    The linearizations of the minimal surface equation at the zero graph
    for boundary data f_1, ..., f_n.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    data
        The boundary data.
    operator
        The first linearized operator L = Delta_g + h1 / 2, with its
        factorization shared by all solves.
    coefficients
        The form coefficients of the area functional at the zero graph.
    first
        v^j, keyed by j.
    second
        w^{jk}, keyed by sorted pairs (j, k).
    third
        w^{jkl}, keyed by sorted triples (j, k, l).
    """

    family: MetricFamily
    mesh: Mesh
    data: tuple[BoundaryFunction, ...]
    operator: EllipticOperator
    coefficients: FormCoefficients
    first: dict[int, np.ndarray] = field(default_factory=dict)
    second: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    third: dict[tuple[int, ...], np.ndarray] = field(default_factory=dict)

    def v(self, j: int) -> np.ndarray:
        return self.first[j]

    def w(self, *indices: int) -> np.ndarray:
        """
        The second (two indices) or third (three indices) linearization.
        Both are symmetric, so the index order does not matter.
        """
        key = tuple(sorted(indices))

        if len(key) == 2:
            return self.second[key]
        if len(key) == 3:
            return self.third[key]

        raise ValueError(f"Expected two or three indices, got {indices}.")


def linearization_bundle(
    family: MetricFamily,
    mesh: Mesh,
    data: Sequence[BoundaryFunction],
    order: int = 2,
    triples: Optional[Sequence[tuple[int, int, int]]] = None,
) -> LinearizationBundle:
    """
    Solves the first ``order`` linearized equations for the given boundary
    data. Independent index combinations are solved in parallel, sharing
    the factorization of L.

    Parameters
    ----------
    family
        The metric family.
    mesh
        The mesh.
    data
        Boundary data f_1, ..., f_n.
    order
        Highest linearization order, 1, 2 or 3.
    triples
        Index triples for the third linearization. Defaults to all sorted
        triples; pairs are always solved in full.

    Returns
    -------
    LinearizationBundle
        The solved bundle.

    Raises
    ------
    EigenvalueCollisionError
        When 0 is numerically a Dirichlet eigenvalue of L.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"Linearization order must be 1, 2 or 3: {order}.")

    op = first_linearized_operator(family, mesh)
    coefficients = form_coefficients(family, mesh)
    indices = range(len(data))

    def first(j):
        return solve_first_lin(family, mesh, data[j], op)

    v = dict(zip(indices, parallel_map(first, indices, prefer="threads")))
    bundle = LinearizationBundle(
        family, mesh, tuple(data), op, coefficients, first=v
    )

    if order >= 2:
        pairs = list(itertools.combinations_with_replacement(indices, 2))

        def second(pair):
            j, k = pair
            return solve_second_lin(family, mesh, v[j], v[k], op, coefficients)

        solved = parallel_map(second, pairs, prefer="threads")
        bundle.second.update(zip(pairs, solved))

    if order == 3:
        if triples is None:
            triples = itertools.combinations_with_replacement(indices, 3)

        keys = sorted({tuple(sorted(triple)) for triple in triples})

        def third(key):
            a, b, c = key
            fields = (v[a], v[b], v[c])
            seconds = (bundle.w(a, b), bundle.w(a, c), bundle.w(b, c))
            return solve_third_lin(
                family, mesh, fields, seconds, op, coefficients
            )

        solved = parallel_map(third, keys, prefer="threads")
        bundle.third.update(zip(keys, solved))

    logger.info(
        f"Linearization bundle: {len(bundle.first)} first, "
        f"{len(bundle.second)} second, {len(bundle.third)} third."
    )
    return bundle
