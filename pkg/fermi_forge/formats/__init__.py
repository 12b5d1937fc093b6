from .parse_mesh import parse_mesh
from .read_mesh import read_mesh
from .tables import (
    read_boundary_function,
    read_field,
    read_table,
    write_boundary_function,
    write_field,
    write_table,
)
from .write_mesh import write_mesh
