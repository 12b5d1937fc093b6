import os
from typing import Union

from fermi_forge.geometry import Mesh

from .parse_mesh import parse_mesh


def read_mesh(path: Union[str, os.PathLike]) -> Mesh:
    """
    Reads a mesh from the passed-in file path.

    Parameters
    ----------
    path
        The path to the mesh file.

    Returns
    -------
    Mesh
        The mesh stored in the file.
    """
    with open(path, "r") as fi:
        return parse_mesh(fi.read())
