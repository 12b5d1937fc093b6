import shutil

import pytest
from numpy.testing import assert_, assert_equal, assert_raises

from fermi_forge.cli import CellMismatch, golden_check
from fermi_forge.exceptions import GoldenMismatchError
from fermi_forge.formats import write_table

ROWS = [
    {"h": 0.1, "quantity": "r", "norm": 0.25, "resolved": True},
    {"h": 0.2, "quantity": "r", "norm": 0.5, "resolved": True},
    {"h": 0.4, "quantity": "r", "norm": float("nan"), "resolved": False},
]


@pytest.fixture
def dirs(tmp_path):
    golden, output = tmp_path / "golden", tmp_path / "output"
    golden.mkdir()
    write_table(golden / "decay.csv", ROWS)
    shutil.copytree(golden, output)
    return golden, output


def test_identical_directories_agree(dirs):
    golden, output = dirs

    with pytest.warns(UserWarning, match="tolerances.yaml"):
        report = golden_check(output, golden)

    assert_(report.passed)
    assert_equal(report.lines(), [])
    report.raise_on_mismatch()


def test_perturbed_cell_is_named(dirs):
    golden, output = dirs
    rows = [dict(row) for row in ROWS]
    rows[1]["norm"] = 0.5 * (1 + 1e-6)
    write_table(output / "decay.csv", rows)

    with pytest.warns(UserWarning):
        report = golden_check(output, golden)

    assert_(not report.passed)
    expected = CellMismatch("decay.csv", 1, "norm", 0.5, 0.5 * (1 + 1e-6))
    assert_equal(report.cells, [expected])
    assert_("decay.csv:1:norm" in report.lines()[0])

    with assert_raises(GoldenMismatchError):
        report.raise_on_mismatch()


def test_manifest_tolerances(dirs):
    golden, output = dirs
    (golden / "tolerances.yaml").write_text("norm: 1.0e-4\n")

    rows = [dict(row) for row in ROWS]
    rows[0]["norm"] = 0.25 * (1 + 1e-6)
    write_table(output / "decay.csv", rows)
    assert_(golden_check(output, golden).passed)

    rows[0]["h"] = 0.1 * (1 + 1e-6)
    write_table(output / "decay.csv", rows)
    report = golden_check(output, golden)
    assert_equal([cell.column for cell in report.cells], ["h"])


def test_reduction_order_differences_are_ignored(dirs):
    golden, output = dirs
    write_table(golden / "zero.csv", [{"value": 0.0}])
    write_table(output / "zero.csv", [{"value": 5e-13}])

    with pytest.warns(UserWarning):
        assert_(golden_check(output, golden).passed)


def test_missing_and_restructured_files(dirs):
    golden, output = dirs
    write_table(golden / "extra.csv", [{"a": 1}])
    write_table(output / "decay.csv", ROWS[:2])

    with pytest.warns(UserWarning):
        report = golden_check(output, golden)

    assert_equal(report.missing, ["extra.csv"])
    assert_equal(report.structure, ["decay.csv"])


def test_missing_golden_directory_raises(tmp_path):
    with assert_raises(FileNotFoundError):
        golden_check(tmp_path, tmp_path / "absent")
