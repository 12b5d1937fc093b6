import numpy as np
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.exceptions import NonSPDMetricError
from fermi_forge.geometry import (
    ConformalFamily,
    ExponentialFamily,
    NonminimalFamily,
    NumericMetricFamily,
    ShearFamily,
    build_mesh,
    check_minimality,
    evaluate_jets,
    make_family,
    metric_jets,
    profile,
    unit_disk,
)

POINTS = np.array([[0.0, 0.0], [0.3, -0.2], [-0.5, 0.5]])


def test_exponential_jets_at_zero():
    family = ExponentialFamily(alpha=0.5, beta=0.25, gamma1=0.2, gamma2=0.1)
    jets = evaluate_jets(family, POINTS)

    assert_allclose(jets.k, np.broadcast_to(np.eye(2), (3, 2, 2)))
    assert_allclose(jets.k1[:, 0, 0], -0.5)
    assert_allclose(jets.k1[:, 1, 1], 0.5)
    assert_allclose(jets.h, 0.0, atol=1e-15)
    assert_allclose(jets.h1, 4 * 0.25)
    assert_allclose(jets.h2, 6 * (0.2 + 0.1))
    assert_allclose(jets.d, 1.0)


def test_fourth_weight_derivative_on_minimal_families():
    """
    With h = 0 and d = 1 at s = 0, the fourth s-derivative of det(g)^{1/2}
    reduces to 3/4 h1^2 + 1/2 h3.
    """
    for family in (ExponentialFamily(), ConformalFamily(), ShearFamily()):
        jets = evaluate_jets(family, POINTS)
        expected = 0.75 * jets.h1**2 + 0.5 * jets.h3
        assert_allclose(jets.d4, expected, atol=1e-14)


def test_weight_jets_match_finite_differences_away_from_zero():
    family = ExponentialFamily(profile="bump")
    s, eta = 0.2, 1e-4

    def weight(t):
        return np.sqrt(np.linalg.det(family.evaluate(POINTS, t)))

    jets = evaluate_jets(family, POINTS, s)
    d1 = (weight(s + eta) - weight(s - eta)) / (2 * eta)
    d2 = (weight(s + eta) - 2 * weight(s) + weight(s - eta)) / eta**2

    assert_allclose(jets.d1, d1, atol=1e-7)
    assert_allclose(jets.d2, d2, atol=1e-5)


def test_conformal_and_shear_first_order_parts():
    jets = evaluate_jets(ConformalFamily(beta=0.25, profile="bump"), POINTS)
    assert_allclose(jets.k1, 0.0, atol=1e-15)
    assert_allclose(jets.h1, 8 * 0.25 * profile("bump", POINTS))

    jets = evaluate_jets(ShearFamily(tau=0.5), POINTS)
    assert_allclose(jets.k1[:, 0, 1], -0.5)
    assert_allclose(np.trace(jets.k1, axis1=1, axis2=2), 0.0, atol=1e-15)


def test_jets_keep_point_shape():
    mesh = build_mesh(unit_disk(), 0)
    jets = metric_jets(make_family("exponential"), mesh, at="quadrature")

    assert_equal(jets.g.shape, (mesh.n_triangles, 3, 2, 2))
    assert_equal(jets.h1.shape, (mesh.n_triangles, 3))

    with assert_raises(ValueError):
        metric_jets(make_family("exponential"), mesh, at="edges")


def test_non_spd_metric_raises():
    def indefinite(points, s):
        return np.broadcast_to(np.diag([1.0, -1.0]), (len(points), 2, 2))

    with assert_raises(NonSPDMetricError):
        evaluate_jets(NumericMetricFamily(indefinite), POINTS)


def test_check_minimality():
    mesh = build_mesh(unit_disk(), 1)

    for name in ("euclidean", "exponential", "conformal", "shear"):
        assert_(check_minimality(make_family(name), mesh))

    report = check_minimality(NonminimalFamily(trace=1.0), mesh)
    assert_(not report)
    assert_allclose(report.max_residual, 1.0)


def test_check_minimality_numeric_family():
    family = ExponentialFamily()
    numeric = NumericMetricFamily(family.evaluate)
    mesh = build_mesh(unit_disk(), 0)

    report = check_minimality(numeric, mesh)
    assert_(report)
    assert_allclose(report.tolerance, 1e-6)
