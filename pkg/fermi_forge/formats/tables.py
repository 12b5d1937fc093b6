import csv
import os
from typing import Any, Union

import numpy as np

from fermi_forge.geometry import Domain
from fermi_forge.pde_core import BoundaryFunction

from .parse_utils import infer_type

PathLike = Union[str, os.PathLike]


def write_table(path: PathLike, rows: list[dict[str, Any]]):
    """
    Writes rows of records as CSV. The header is taken from the keys of the
    first row; floats are written with ``repr`` so that reading them back is
    exact.
    """
    if not rows:
        raise ValueError("Cannot write an empty table.")

    header = list(rows[0].keys())

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(row[key]) for key in header])


def read_table(path: PathLike) -> list[dict[str, Any]]:
    """
    Reads a CSV table written by ``write_table``, inferring int, float and
    string values.
    """
    with open(path, newline="") as fh:
        return [
            {key: infer_type(value) for key, value in row.items()}
            for row in csv.DictReader(fh)
        ]


def write_field(path: PathLike, values: np.ndarray):
    """
    Writes a nodal field as CSV with columns node, real, imag.
    """
    values = np.asarray(values, dtype=complex)
    rows = [
        {"node": node, "real": val.real, "imag": val.imag}
        for node, val in enumerate(values.tolist())
    ]
    write_table(path, rows)


def read_field(path: PathLike) -> np.ndarray:
    """
    Reads a nodal field written by ``write_field``. The result is real when
    all imaginary parts vanish.
    """
    rows = sorted(read_table(path), key=lambda row: row["node"])
    values = np.array([complex(row["real"], row["imag"]) for row in rows])
    return values.real if np.all(values.imag == 0) else values


def write_boundary_function(path: PathLike, func: BoundaryFunction):
    """
    Writes a boundary function as CSV with columns component, mode, real,
    imag.
    """
    rows = [
        {"component": comp, "mode": int(n), "real": val.real, "imag": val.imag}
        for comp, coeffs in enumerate(func.coefficients)
        for n, val in zip(func.modes, coeffs.tolist())
    ]
    write_table(path, rows)


def read_boundary_function(path: PathLike, domain: Domain) -> BoundaryFunction:
    """
    Reads a boundary function written by ``write_boundary_function``.
    Missing modes are zero.
    """
    rows = read_table(path)
    n_modes = max(abs(row["mode"]) for row in rows)
    n_components = len(domain.boundary_components)
    coeffs = np.zeros((n_components, 2 * n_modes + 1), dtype=complex)

    for row in rows:
        value = complex(row["real"], row["imag"])
        coeffs[row["component"], row["mode"] + n_modes] = value

    return BoundaryFunction(domain, coeffs)


def _format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)
