from typing import Callable

import numpy as np

from fermi_forge.pde_core import BoundaryFunction, DNMatrix


def holo_trace_test(f: BoundaryFunction, dn: DNMatrix) -> float:
    """
    Residual of the holomorphic-extension criterion d_tau f - i Lambda f = 0
    for the DN map Lambda of the zero-potential equation, relative to the
    H^1 norm of f. The tangential derivative is taken exactly in the Fourier
    basis; the residual is small iff f is the trace of a holomorphic
    function.
    """
    f = f.with_modes(dn.n_modes)
    norm = f.h1_norm()

    if norm == 0:
        return 0.0

    residual = f.tangential_derivative() - 1j * dn.apply(f)
    return residual.norm() / norm


def trace_of(
    dn: DNMatrix, func: Callable[[np.ndarray], np.ndarray]
) -> BoundaryFunction:
    """
    Boundary trace of a complex function of z.
    """

    def values(x, y):
        return func(x + 1j * y)

    return BoundaryFunction.from_callable(dn.domain, values, dn.n_modes)
