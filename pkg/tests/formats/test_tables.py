import numpy as np
from numpy.testing import assert_, assert_allclose, assert_equal, assert_raises

from fermi_forge.formats import (
    read_boundary_function,
    read_field,
    read_table,
    write_boundary_function,
    write_field,
    write_table,
)
from fermi_forge.geometry import annulus
from fermi_forge.pde_core import BoundaryFunction


def test_write_table_header_and_values(tmp_path):
    rows = [
        {"h": 0.1, "norm": 1 / 3, "level": 2, "name": "a"},
        {"h": 0.05, "norm": 2 / 3, "level": 3, "name": "b"},
    ]
    write_table(tmp_path / "table.csv", rows)

    with open(tmp_path / "table.csv") as fh:
        lines = fh.read().splitlines()

    assert_equal(lines[0], "h,norm,level,name")
    assert_equal(lines[1], f"0.1,{1 / 3!r},2,a")

    read = read_table(tmp_path / "table.csv")
    assert_equal(read, rows)


def test_empty_table_raises(tmp_path):
    with assert_raises(ValueError):
        write_table(tmp_path / "table.csv", [])


def test_field_csv(tmp_path):
    values = np.array([1.0, -0.5 + 2j, 1e-17j])
    write_field(tmp_path / "field.csv", values)
    assert_equal(read_field(tmp_path / "field.csv"), values)

    real = np.linspace(0, 1, 5)
    write_field(tmp_path / "real.csv", real)
    read = read_field(tmp_path / "real.csv")

    assert_(not np.iscomplexobj(read))
    assert_equal(read, real)


def test_boundary_function_csv(tmp_path):
    domain = annulus(0.5)
    f = BoundaryFunction.trigonometric(domain, 2, 0.3, n_modes=3)
    f = f + BoundaryFunction.from_mode(domain, -1, 1, 0.5j, n_modes=3)

    write_boundary_function(tmp_path / "f.csv", f)
    read = read_boundary_function(tmp_path / "f.csv", domain)

    assert_allclose(read.coefficients, f.coefficients, rtol=0, atol=0)
