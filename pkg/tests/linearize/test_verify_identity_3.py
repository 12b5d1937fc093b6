from numpy.testing import assert_, assert_allclose

from fermi_forge.geometry import (
    EuclideanFamily,
    ExponentialFamily,
    build_mesh,
    make_family,
    unit_disk,
)
from fermi_forge.linearize import verify_identity_3
from fermi_forge.pde_core import BoundaryFunction


def _data(mesh):
    return [
        BoundaryFunction.trigonometric(mesh.domain, 1),
        BoundaryFunction.trigonometric(mesh.domain, 2),
    ]


INDICES = (0, 0, 1, 1)
TENSOR_TERMS = (
    "boundary_k2",
    "boundary_d2",
    "boundary_k1_grad_w",
    "boundary_conormal",
)


def test_euclidean_family_keeps_only_principal_terms():
    mesh = build_mesh(unit_disk(), 1)
    report = verify_identity_3(
        EuclideanFamily(), mesh, _data(mesh), INDICES, eps=5e-3
    )

    assert_allclose(report.group("H"), 0.0, atol=1e-15)
    assert_allclose(report.group("R"), 0.0, atol=1e-15)
    for name in TENSOR_TERMS:
        assert_allclose(report.boundary[name], 0.0, atol=1e-15)

    assert_(abs(report.group("principal")) > 1e-2)
    assert_(abs(report.boundary["boundary_grad"]) > 1e-3)
    assert_(report.residual < 1e-2, msg=f"residual {report.residual:.2e}")


def test_catalog_family_satisfies_identity():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    report = verify_identity_3(family, mesh, _data(mesh), INDICES, eps=5e-3)

    assert_(abs(report.group("H")) > 0)
    assert_(abs(report.group("R")) > 0)
    assert_(abs(report.boundary["boundary_conormal"]) > 1e-3)
    assert_(report.residual < 1e-2, msg=f"residual {report.residual:.2e}")


def test_boundary_flat_metric_has_no_tensor_boundary_terms():
    """
    With the bump profile all s-derivatives of the metric vanish on the
    boundary, so only the gradient boundary term survives.
    """
    family = ExponentialFamily(profile="bump")
    mesh = build_mesh(unit_disk(), 1)
    report = verify_identity_3(family, mesh, _data(mesh), INDICES)

    for name in TENSOR_TERMS:
        assert_allclose(report.boundary[name], 0.0, atol=1e-14)

    assert_(abs(report.boundary["boundary_grad"]) > 1e-3)
