import itertools

from numpy.testing import assert_, assert_allclose

from fermi_forge.forward import nonlinear_dn
from fermi_forge.geometry import (
    EuclideanFamily,
    build_mesh,
    make_family,
    unit_disk,
)
from fermi_forge.linearize import (
    linearization_bundle,
    mixed_difference,
    verify_identity_2,
)
from fermi_forge.pde_core import BoundaryFunction


def _data(mesh):
    return [
        BoundaryFunction.trigonometric(mesh.domain, 1),
        BoundaryFunction.trigonometric(mesh.domain, 1, kind="sin"),
        BoundaryFunction.trigonometric(mesh.domain, 2),
    ]


def test_euclidean_family_has_vanishing_sides():
    mesh = build_mesh(unit_disk(), 1)
    report = verify_identity_2(EuclideanFamily(), mesh, _data(mesh))

    assert_allclose(list(report.terms.values()), 0.0, atol=1e-15)
    assert_allclose(list(report.boundary.values()), 0.0, atol=1e-15)
    assert_allclose(report.lhs, 0.0, atol=1e-8)


def test_catalog_family_satisfies_identity():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    data = _data(mesh)
    report = verify_identity_2(family, mesh, data, (0, 0, 2), eps=2.5e-3)

    assert_(abs(report.rhs) > 1e-1)
    assert_(report.residual < 2e-3, msg=f"residual {report.residual:.2e}")

    # The conormal of the DN map varies with u, so the identity does not
    # hold with the volume terms and the k1 boundary term alone.
    conormal = report.boundary["boundary_conormal"]
    assert_(abs(conormal) > 0.5 * abs(report.lhs))
    assert_(abs(report.lhs - (report.rhs - conormal)) > 0.1)


def test_lhs_is_derivative_of_dn_pairing():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    data = _data(mesh)
    report = verify_identity_2(family, mesh, data, (0, 0, 2))

    def pairing(amplitudes):
        f = float(amplitudes[0] + amplitudes[1]) * data[0]
        return nonlinear_dn(family, mesh, f).pairing(data[2]).real

    expected = mixed_difference(pairing, 2, 1e-2)
    assert_allclose(report.lhs, expected, rtol=1e-8, atol=1e-12)


def test_vanishing_tuple_has_small_residual():
    """
    The exponential family and the mesh are invariant under the rotation
    by pi, which flips the sign of cos(theta) and sin(theta). Both sides
    vanish for (0, 1, 1) since the data has odd total parity.
    """
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 1)
    report = verify_identity_2(family, mesh, _data(mesh), (0, 1, 1))

    assert_(abs(report.lhs) < 1e-8)
    assert_(abs(report.rhs) < 1e-8)
    assert_(report.residual < 1e-2, msg=f"residual {report.residual:.2e}")


def test_volume_terms_are_symmetric_in_the_indices():
    family = make_family("shear")
    mesh = build_mesh(unit_disk(), 1)
    data = _data(mesh)
    bundle = linearization_bundle(family, mesh, data)

    volumes = [
        verify_identity_2(family, mesh, data, idcs, bundle=bundle).volume
        for idcs in itertools.permutations(range(3))
    ]
    assert_allclose(volumes, volumes[0], rtol=1e-10)


def test_report_rows():
    family = make_family("exponential")
    mesh = build_mesh(unit_disk(), 0)
    report = verify_identity_2(family, mesh, _data(mesh))
    rows = report.to_rows()

    names = [row["term"] for row in rows]
    for name in ("lhs", "rhs", "volume", "k1_m", "h2", "boundary", "B"):
        assert_(name in names, msg=name)

    assert_("boundary_conormal" in names)
    assert_(all(row["indices"] == "0-1-2" for row in rows))
    assert_allclose([row["residual"] for row in rows], report.residual)
