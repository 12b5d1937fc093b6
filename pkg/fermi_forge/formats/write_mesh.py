import os
from typing import Sequence, Union

from fermi_forge.geometry import Mesh


def write_mesh(path: Union[str, os.PathLike], mesh: Mesh, name: str = ""):
    """
    Writes a mesh to file in the plain-text node/element format read by
    ``read_mesh``.

    Parameters
    ----------
    path
        The file path.
    mesh
        The mesh to write.
    name
        Optional mesh name, written as the NAME specification.
    """
    domain = mesh.domain
    specs = {
        "NAME": name or f"{domain.kind}-L{mesh.refinement_level}",
        "DOMAIN": domain.kind,
        "LEVEL": mesh.refinement_level,
        "DIMENSION": mesh.n_nodes,
        "TRIANGLES": mesh.n_triangles,
        "ORIENTATION": " ".join(
            str(circle.orientation) for circle in domain.boundary_components
        ),
    }

    if domain.inner_radius is not None:
        specs["INNER_RADIUS"] = domain.inner_radius

    boundary = [
        (comp, node + 1)
        for comp, nodes in enumerate(mesh.boundary_nodes, 1)
        for node in nodes.tolist()
    ]
    rings = [
        (ring, node + 1)
        for ring, nodes in enumerate(mesh.rings, 1)
        for node in nodes.tolist()
    ]

    with open(path, "w") as fh:
        for key, value in specs.items():
            fh.write(f"{key}: {value}\n")

        fh.write(_format_section("NODE_COORD_SECTION", mesh.nodes.tolist()))
        fh.write(
            _format_section("TRIANGLE_SECTION", (mesh.triangles + 1).tolist())
        )
        fh.write(_format_section("BOUNDARY_SECTION", boundary, index=False))

        if rings:
            fh.write(_format_section("RING_SECTION", rings, index=False))

        fh.write("EOF\n")


def _format_section(
    name: str, rows: Sequence[Sequence], index: bool = True
) -> str:
    """
    Formats a data section as the section name followed by one
    tab-separated row per line, optionally prefixed with a 1-based index.
    """
    section = [name]

    for idx, row in enumerate(rows, 1):
        prefix = f"{idx}\t" if index else ""
        section.append(prefix + "\t".join(str(elt) for elt in row))

    return "\n".join(section) + "\n"
