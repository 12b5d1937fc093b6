from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from fermi_forge.exceptions import DegenerateMeshError

from .domain import Domain

# Barycentric weights of the three edge midpoints, in the order
# mid(v0, v1), mid(v1, v2), mid(v2, v0). Row q holds the values of the three
# nodal basis functions at quadrature point q.
EDGE_MIDPOINT_BASIS = np.array(
    [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]]
)


@dataclass(frozen=True)
class BoundaryEdges:
    """
    Boundary edges of one component in traversal order. Each edge runs from
    ``nodes[e, 0]`` to ``nodes[e, 1]``; ``triangles[e]`` is the triangle
    containing it and ``normals[e]`` the outward Euclidean unit normal.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    normals: np.ndarray
    lengths: np.ndarray
    midpoints: np.ndarray


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Conforming P1 triangulation of a planar domain.

    Parameters
    ----------
    nodes
        Node coordinates, shape (n_nodes, 2).
    triangles
        Counterclockwise node index triples, shape (n_triangles, 3).
    boundary_nodes
        Per boundary component, the node indices in traversal order. The
        components follow ``domain.boundary_components``.
    refinement_level
        The level the mesh was built at.
    domain
        The domain that is triangulated.
    rings
        Node indices of the concentric node circles, ordered by radius.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_nodes: tuple[np.ndarray, ...]
    refinement_level: int
    domain: Domain
    rings: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        if np.any(self.signed_areas <= 1e-14):
            msg = "Mesh contains degenerate or clockwise triangles."
            raise DegenerateMeshError(msg)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @cached_property
    def signed_areas(self) -> np.ndarray:
        p0, p1, p2 = (self.nodes[self.triangles[:, i]] for i in range(3))
        e1, e2 = p1 - p0, p2 - p0
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @property
    def areas(self) -> np.ndarray:
        return self.signed_areas

    @cached_property
    def basis_gradients(self) -> np.ndarray:
        """
        Gradients of the three nodal basis functions per triangle, shape
        (n_triangles, 3, 2).
        """
        p = self.nodes[self.triangles]
        # The gradient of basis function a is the rotated opposite edge.
        opposite = np.roll(p, -1, axis=1) - np.roll(p, -2, axis=1)
        rotated = np.stack([-opposite[..., 1], opposite[..., 0]], axis=-1)
        return -rotated / (2 * self.signed_areas[:, None, None])

    @cached_property
    def quadrature_points(self) -> np.ndarray:
        """
        Edge midpoints of every triangle, shape (n_triangles, 3, 2).
        """
        vertices = self.nodes[self.triangles]
        return np.einsum("qa,tai->tqi", EDGE_MIDPOINT_BASIS, vertices)

    @cached_property
    def is_boundary(self) -> np.ndarray:
        mask = np.zeros(self.n_nodes, dtype=bool)
        for component in self.boundary_nodes:
            mask[component] = True
        return mask

    @cached_property
    def interior_nodes(self) -> np.ndarray:
        return np.flatnonzero(~self.is_boundary)

    @cached_property
    def all_boundary_nodes(self) -> np.ndarray:
        return np.concatenate(self.boundary_nodes)

    @cached_property
    def edges(self) -> np.ndarray:
        """
        Unique undirected edges, shape (n_edges, 2), sorted node pairs.
        """
        pairs = self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        return np.unique(np.sort(pairs, axis=1), axis=0)

    @property
    def max_edge_length(self) -> float:
        diff = self.nodes[self.edges[:, 0]] - self.nodes[self.edges[:, 1]]
        return float(np.hypot(*diff.T).max())

    @property
    def min_angle(self) -> float:
        """
        Smallest interior triangle angle, in degrees.
        """
        p = self.nodes[self.triangles]
        angles = []
        for a in range(3):
            u = p[:, (a + 1) % 3] - p[:, a]
            v = p[:, (a + 2) % 3] - p[:, a]
            cos = np.einsum("ti,ti->t", u, v)
            cos /= np.hypot(*u.T) * np.hypot(*v.T)
            angles.append(np.degrees(np.arccos(np.clip(cos, -1, 1))))

        return float(np.min(angles))

    @cached_property
    def boundary_edges(self) -> tuple[BoundaryEdges, ...]:
        edge2tri = {}
        for tri_idx, tri in enumerate(self.triangles):
            for a in range(3):
                edge2tri[(tri[a], tri[(a + 1) % 3])] = tri_idx

        components = []
        for component in self.boundary_nodes:
            start = component
            end = np.roll(component, -1)
            tris = []
            for i, j in zip(start, end):
                # Boundary edges appear in exactly one triangle, in either
                # direction depending on the traversal orientation.
                tri = edge2tri.get((i, j), edge2tri.get((j, i)))
                tris.append(tri)

            tris = np.array(tris)
            tangent = self.nodes[end] - self.nodes[start]
            lengths = np.hypot(*tangent.T)
            normals = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
            normals /= lengths[:, None]

            # Orient normals away from the triangle's third vertex.
            centroids = self.nodes[self.triangles[tris]].mean(axis=1)
            midpoints = 0.5 * (self.nodes[start] + self.nodes[end])
            flip = np.einsum("ei,ei->e", normals, midpoints - centroids) < 0
            normals[flip] *= -1

            components.append(
                BoundaryEdges(
                    nodes=np.stack([start, end], axis=1),
                    triangles=tris,
                    normals=normals,
                    lengths=lengths,
                    midpoints=midpoints,
                )
            )

        return tuple(components)

    def boundary_angles(self, component: int) -> np.ndarray:
        x, y = self.nodes[self.boundary_nodes[component]].T
        return np.arctan2(y, x)
