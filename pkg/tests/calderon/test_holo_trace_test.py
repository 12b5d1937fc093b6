import numpy as np
import pytest
from numpy.testing import assert_, assert_allclose

from fermi_forge.calderon import holo_trace_test, schrodinger_dn, trace_of
from fermi_forge.geometry import build_mesh, unit_disk
from fermi_forge.pde_core import BoundaryFunction


@pytest.fixture(scope="module")
def dn():
    return schrodinger_dn(build_mesh(unit_disk(), 3), n_modes=8)


@pytest.mark.parametrize(
    "func",
    [lambda z: z, lambda z: z**2 + 3, lambda z: (1 + 1j) * z**3 - z],
)
def test_holomorphic_traces_pass(dn, func):
    assert_(holo_trace_test(trace_of(dn, func), dn) < 0.05)


def test_conjugate_traces_fail(dn):
    assert_(holo_trace_test(trace_of(dn, np.conj), dn) >= 0.5)
    assert_(holo_trace_test(trace_of(dn, lambda z: np.conj(z**2)), dn) > 0.1)


def test_residual_decreases_under_refinement():
    residuals = []
    for level in (2, 3):
        dn = schrodinger_dn(build_mesh(unit_disk(), level), n_modes=8)
        residuals.append(holo_trace_test(trace_of(dn, lambda z: z**2), dn))

    assert_(residuals[1] < residuals[0])


def test_random_holomorphic_polynomials_separate(dn):
    rng = np.random.default_rng(1)

    for _ in range(10):
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)

        def poly(z):
            return np.polyval(coeffs[::-1], z)

        assert_(holo_trace_test(trace_of(dn, poly), dn) < 0.05)

        conjugate = holo_trace_test(
            trace_of(dn, lambda z: np.conj(poly(z))), dn
        )
        assert_(conjugate > 0.1)


def test_zero_function(dn):
    zero = BoundaryFunction.zeros(dn.domain, dn.n_modes)
    assert_allclose(holo_trace_test(zero, dn), 0)
