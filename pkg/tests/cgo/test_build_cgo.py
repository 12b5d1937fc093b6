import numpy as np
from numpy.polynomial import Polynomial
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.cgo import (
    CGOGrid,
    Phase,
    build_cgo,
    phase_catalog,
    potential_from_family,
)
from fermi_forge.exceptions import SeriesDivergenceError
from fermi_forge.geometry import ExponentialFamily


def test_zero_potential_gives_pure_exponential():
    grid = CGOGrid(size=64)
    phase = Phase((0, 1))
    solution = build_cgo(phase, 0.0, 0.5, grid)

    assert_equal(solution.n_terms, 0)
    assert_equal(solution.fixed_point_defect, 0.0)
    assert_allclose(solution.r, 0.0)
    assert_allclose(solution.values(), np.exp(grid.z / 0.5))

    d_part, dbar_part = solution.scaled_derivatives()
    assert_allclose(d_part, 2.0)
    assert_allclose(dbar_part, 0.0)


def test_potential_from_exponential_family():
    grid = CGOGrid(size=32)
    q = potential_from_family(grid, ExponentialFamily(beta=0.25))

    assert_allclose(q, 0.5)


def test_fixed_point_defect_decays_geometrically_with_truncation():
    grid = CGOGrid(size=128)
    phase = Phase((0, 1))
    q = potential_from_family(grid, ExponentialFamily())

    solutions = [
        build_cgo(phase, q, 0.3, grid, n_terms=n_terms)
        for n_terms in range(4)
    ]
    defects = [solution.fixed_point_defect for solution in solutions]

    assert_(all(b < 0.5 * a for a, b in zip(defects, defects[1:])))

    # The defect at truncation J is the norm of the first omitted term.
    for current, following in zip(solutions, solutions[1:]):
        expected = following.term_norms[-1]
        assert_allclose(current.fixed_point_defect, expected, rtol=1e-6)


def test_adaptive_truncation_reaches_tolerance():
    grid = CGOGrid(size=64)
    solution = build_cgo(Phase((0, 1)), 0.5, 0.3, grid, rtol=1e-6)
    norms = solution.term_norms

    assert_(norms[-1] < 1e-6 * norms[0])
    assert_(solution.contraction < 1)
    assert_equal(len(norms), solution.n_terms + 1)


def test_solves_conjugated_equation():
    grid = CGOGrid(size=128)
    h, q = 0.3, 0.5
    solution = build_cgo(Phase((0, 1)), q, h, grid)
    r = solution.r

    # exp(-z / h)(Delta + q) exp(z / h)(1 + r) with Delta = -4 d dbar.
    dbar_r = grid.dbar(r)
    conjugated = -4 * (grid.d(dbar_r) + dbar_r / h) + q * (1 + r)

    inner = np.abs(grid.z) < 0.9
    error = np.linalg.norm(conjugated[inner])
    scale = np.linalg.norm((q * (1 + r))[inner])
    assert_(error < 5e-2 * scale, msg=f"relative error {error / scale:.2e}")


def test_antiholomorphic_solution_is_conjugate():
    grid = CGOGrid(size=64)
    holomorphic = Phase((0, 1, 0.2))
    antiholomorphic = Phase((0, 1, 0.2), antiholomorphic=True)
    amplitude = Polynomial([1, 0.5j])

    solution = build_cgo(holomorphic, 0.5, 0.5, grid, amplitude)
    conjugate = build_cgo(antiholomorphic, 0.5, 0.5, grid, amplitude)

    assert_allclose(conjugate.r, np.conj(solution.r))
    assert_allclose(conjugate.values(), np.conj(solution.values()))


def test_catalog_phase_builds():
    grid = CGOGrid(size=64)
    theta3 = phase_catalog()["theta3"]
    solution = build_cgo(theta3, 0.5, 0.6, grid)

    assert_(np.isfinite(solution.remainder_norm(4)))
    assert_(all(np.isfinite(solution.derivative_norms(2))))


def test_non_contraction_raises():
    grid = CGOGrid(size=64)

    with assert_raises(SeriesDivergenceError):
        build_cgo(Phase((0, 1)), 1000.0, 1.0, grid)
