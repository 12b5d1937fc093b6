import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import yaml

from fermi_forge.exceptions import GoldenMismatchError
from fermi_forge.formats import read_table

logger = logging.getLogger(__name__)

MANIFEST = "tolerances.yaml"
DEFAULT_RTOL = 1e-8

# Absolute slack for floating-point reduction order.
REDUCTION_ATOL = 1e-12

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class CellMismatch:
    file: str
    row: int
    column: str
    expected: Any
    actual: Any

    def __str__(self) -> str:
        return (
            f"{self.file}:{self.row}:{self.column}: expected "
            f"{self.expected!r}, got {self.actual!r}"
        )


@dataclass
class GoldenReport:
    """
    Differences between an output directory and its golden reference.

    Attributes
    ----------
    missing
        Golden files absent from the output directory.
    structure
        Files whose header or row count differs.
    cells
        Cells outside their tolerance.
    """

    missing: list[str] = field(default_factory=list)
    structure: list[str] = field(default_factory=list)
    cells: list[CellMismatch] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.missing or self.structure or self.cells)

    def lines(self) -> list[str]:
        lines = [f"missing: {name}" for name in self.missing]
        lines += [f"structure: {name}" for name in self.structure]
        lines += [str(cell) for cell in self.cells]
        return lines

    def raise_on_mismatch(self):
        if not self.passed:
            msg = "Golden mismatch:\n" + "\n".join(self.lines())
            raise GoldenMismatchError(msg)


def read_tolerances(golden_dir: PathLike) -> dict[str, float]:
    """
    Reads the per-column relative tolerances of the golden directory. The
    manifest maps column names to tolerances; the key ``default`` applies
    to all other columns. Without a manifest every column uses
    DEFAULT_RTOL, with a warning.
    """
    path = Path(golden_dir) / MANIFEST

    if not path.exists():
        msg = f"No {MANIFEST} in {golden_dir}; using rtol {DEFAULT_RTOL}."
        warnings.warn(msg)
        return {"default": DEFAULT_RTOL}

    with open(path) as fh:
        tolerances = yaml.safe_load(fh) or {}

    tolerances.setdefault("default", DEFAULT_RTOL)
    return {key: float(value) for key, value in tolerances.items()}


def _matches(expected: Any, actual: Any, rtol: float) -> bool:
    numbers = (int, float)
    if not (isinstance(expected, numbers) and isinstance(actual, numbers)):
        return expected == actual

    if math.isnan(expected) or math.isnan(actual):
        return math.isnan(expected) and math.isnan(actual)

    if math.isinf(expected) or math.isinf(actual):
        return expected == actual

    scale = max(abs(expected), abs(actual))
    return abs(expected - actual) <= rtol * scale + REDUCTION_ATOL


def golden_check(output_dir: PathLike, golden_dir: PathLike) -> GoldenReport:
    """
    Compares every CSV table of the golden directory with the table of the
    same name in the output directory, cell by cell.

    Parameters
    ----------
    output_dir
        Directory with the tables of a run.
    golden_dir
        Directory with the reference tables and, optionally, the tolerance
        manifest ``tolerances.yaml``.

    Returns
    -------
    GoldenReport
        The named differences; empty when the directories agree.

    Raises
    ------
    FileNotFoundError
        When the golden directory does not exist.
    """
    if not Path(golden_dir).is_dir():
        raise FileNotFoundError(f"Golden directory {golden_dir} not found.")

    tolerances = read_tolerances(golden_dir)
    report = GoldenReport()

    for golden in sorted(Path(golden_dir).glob("*.csv")):
        output = Path(output_dir) / golden.name

        if not output.exists():
            report.missing.append(golden.name)
            continue

        expected, actual = read_table(golden), read_table(output)
        header = list(expected[0]) if expected else []
        same_header = header == (list(actual[0]) if actual else [])

        if not same_header or len(expected) != len(actual):
            report.structure.append(golden.name)
            continue

        for idx, (exp_row, act_row) in enumerate(zip(expected, actual)):
            for column, exp in exp_row.items():
                rtol = tolerances.get(column, tolerances["default"])
                if not _matches(exp, act_row[column], rtol):
                    mismatch = CellMismatch(
                        golden.name, idx, column, exp, act_row[column]
                    )
                    report.cells.append(mismatch)

    logger.info(f"Golden check: {len(report.lines())} differences.")
    return report
