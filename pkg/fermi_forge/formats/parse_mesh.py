import numpy as np

from fermi_forge.geometry import Domain, Mesh

from .parse_utils import (
    group_specifications_and_sections,
    infer_type,
    parse_specification,
    text2lines,
)

REQUIRED_SECTIONS = ("node_coord", "triangle", "boundary")


def parse_mesh(text: str) -> Mesh:
    """
    Parses a mesh in the plain-text node/element format. The file consists
    of two parts:
    1) Specifications: lines of the form <KEY>: <VALUE>, among which
       DOMAIN, LEVEL, DIMENSION (node count) and TRIANGLES (triangle count).
    2) Data sections: NODE_COORD_SECTION with rows "index x y",
       TRIANGLE_SECTION with rows "index a b c" and BOUNDARY_SECTION with
       rows "component node", all indices 1-based. An optional
       RING_SECTION with rows "ring node" lists the node circles.

    Parameters
    ----------
    text
        The mesh text.

    Returns
    -------
    Mesh
        The parsed mesh.
    """
    specs, sections = group_specifications_and_sections(text2lines(text))
    header = dict(parse_specification(spec) for spec in specs)
    data = dict(parse_section(section) for section in sections)

    for name in REQUIRED_SECTIONS:
        if name not in data:
            raise ValueError(f"Mesh text lacks {name.upper()}_SECTION.")

    nodes = data["node_coord"][:, 1:].astype(float)
    triangles = data["triangle"][:, 1:].astype(int) - 1

    if len(nodes) != header.get("dimension", len(nodes)):
        raise ValueError("Node count does not match DIMENSION.")

    if len(triangles) != header.get("triangles", len(triangles)):
        raise ValueError("Triangle count does not match TRIANGLES.")

    boundary = data["boundary"].astype(int)
    components = tuple(
        boundary[boundary[:, 0] == comp, 1] - 1
        for comp in np.unique(boundary[:, 0])
    )

    rings = ()
    if "ring" in data:
        ring_rows = data["ring"].astype(int)
        rings = tuple(
            ring_rows[ring_rows[:, 0] == ring, 1] - 1
            for ring in np.unique(ring_rows[:, 0])
        )

    inner = header.get("inner_radius")
    domain = Domain(header.get("domain", "unit_disk"), inner)

    return Mesh(
        nodes=nodes,
        triangles=triangles,
        boundary_nodes=components,
        refinement_level=int(header.get("level", 0)),
        domain=domain,
        rings=rings,
    )


def parse_section(lines: list[str]) -> tuple[str, np.ndarray]:
    """
    Parses the data section lines into a lowercase name and an array of
    rows.
    """
    name = lines[0].strip().removesuffix("_SECTION").lower()
    rows = [[infer_type(n) for n in line.split()] for line in lines[1:]]

    if any(len(row) != len(rows[0]) for row in rows):
        raise ValueError(f"Section {name.upper()} has ragged rows.")

    return name, np.array(rows)
