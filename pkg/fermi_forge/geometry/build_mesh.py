import logging

import numpy as np

from fermi_forge.exceptions import ResourceError

from .domain import Domain
from .mesh import Mesh

logger = logging.getLogger(__name__)

MAX_LEVEL = 7
BASE_RINGS = 4
NODES_PER_UNIT_RADIUS = 6


def build_mesh(domain: Domain, level: int) -> Mesh:
    """
    Builds a quasi-uniform triangulation of the domain from concentric node
    circles. Level L uses 4 * 2**L radial layers across the unit radius, so
    the maximal edge length and the boundary node spacing halve per level.

    Parameters
    ----------
    domain
        The unit disk or an annulus.
    level
        Refinement level, between 0 and ``MAX_LEVEL``.

    Returns
    -------
    Mesh
        The triangulation. Boundary nodes lie exactly on the circles.
    """
    if level < 0:
        raise ValueError("Mesh level must be non-negative.")

    if level > MAX_LEVEL:
        msg = f"Mesh level {level} exceeds the cap of {MAX_LEVEL}."
        raise ResourceError(msg)

    layers = BASE_RINGS * 2**level

    if domain.kind == "unit_disk":
        radii = np.arange(layers + 1) / layers
        counts = NODES_PER_UNIT_RADIUS * np.arange(layers + 1)
        counts[0] = 1
    else:
        inner = domain.inner_radius
        steps = max(1, round((1 - inner) * layers))
        radii = inner + (1 - inner) * np.arange(steps + 1) / steps
        counts = np.maximum(
            NODES_PER_UNIT_RADIUS,
            NODES_PER_UNIT_RADIUS * np.round(layers * radii).astype(int),
        )

    nodes, rings = _place_rings(radii, counts)
    triangles = []

    for inner_ring, outer_ring in zip(rings[:-1], rings[1:]):
        if len(inner_ring) == 1:
            triangles.append(_fan(inner_ring[0], outer_ring))
        else:
            triangles.append(_stitch(inner_ring, outer_ring))

    triangles = _orient(nodes, np.concatenate(triangles))

    if domain.kind == "unit_disk":
        boundary = (rings[-1],)
    else:
        boundary = (rings[-1], rings[0][::-1])

    logger.debug(
        f"Built {domain.kind} mesh at level {level}: {len(nodes)} nodes, "
        f"{len(triangles)} triangles."
    )

    return Mesh(
        nodes=nodes,
        triangles=triangles,
        boundary_nodes=boundary,
        refinement_level=level,
        domain=domain,
        rings=tuple(rings),
    )


def _place_rings(radii: np.ndarray, counts: np.ndarray):
    """
    Places ``counts[i]`` equispaced nodes on the circle of radius
    ``radii[i]``, starting at angle zero.
    """
    nodes = []
    rings = []
    offset = 0

    for radius, count in zip(radii, counts):
        angles = 2 * np.pi * np.arange(count) / count
        nodes.append(radius * np.stack([np.cos(angles), np.sin(angles)], 1))
        rings.append(offset + np.arange(count))
        offset += count

    return np.concatenate(nodes), rings


def _fan(center: int, ring: np.ndarray) -> np.ndarray:
    return np.stack(
        [np.full(len(ring), center), ring, np.roll(ring, -1)], axis=1
    )


def _stitch(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """
    Zips two concentric node circles into a band of triangles by always
    advancing along the circle whose next node has the smaller angle.
    """
    n_in, n_out = len(inner), len(outer)
    i = j = 0
    triangles = []

    while i < n_in or j < n_out:
        next_in = (i + 1) / n_in
        next_out = (j + 1) / n_out

        if j == n_out or (i < n_in and next_in < next_out - 1e-12):
            a, b, c = inner[i % n_in], inner[(i + 1) % n_in], outer[j % n_out]
            triangles.append((a, b, c))
            i += 1
        else:
            a, b, c = inner[i % n_in], outer[(j + 1) % n_out], outer[j % n_out]
            triangles.append((a, b, c))
            j += 1

    return np.array(triangles)


def _orient(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p0, p1, p2 = (nodes[triangles[:, i]] for i in range(3))
    e1, e2 = p1 - p0, p2 - p0
    clockwise = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0

    triangles = triangles.copy()
    triangles[clockwise] = triangles[clockwise][:, [0, 2, 1]]
    return triangles
