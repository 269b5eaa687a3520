from collections import namedtuple
from errorClasses.errors import MeshError, SubsetLookupError
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
import numpy as np
import logging

logger = logging.getLogger(__name__)

Node = namedtuple('Node', 'id x0 y0')
Triangle = namedtuple('Triangle', 'm n p')


class StructuredSpec():
    """
    Regular Lx x Ly grid of nx x ny rectangles, every rectangle split along
    its lower-left to upper-right diagonal.
    """

    DIAGONAL = 'lower-left-to-upper-right'

    def __init__(self, Lx:float, Ly:float, nx:int, ny:int):
        for name, length in (('Lx', Lx), ('Ly', Ly)):
            if isinstance(length, bool) or not isinstance(length, (int, float)):
                raise TypeError(f"{name} should be a number!")
            if not np.isfinite(length) or length <= 0:
                raise ValueError(f"{name} should be a positive finite length")

        for name, count in (('nx', nx), ('ny', ny)):
            if isinstance(count, bool) or not isinstance(count, (int, np.integer)):
                raise TypeError(f"{name} should be an int!")
            if count < 1:
                raise ValueError(f"{name} should not be less than 1")

        self._Lx = float(Lx)
        self._Ly = float(Ly)
        self._nx = int(nx)
        self._ny = int(ny)

    @property
    def Lx(self):
        return self._Lx

    @property
    def Ly(self):
        return self._Ly

    @property
    def nx(self):
        """
        Rectangles along x
        """
        return self._nx

    @property
    def ny(self):
        """
        Rectangles along y
        """
        return self._ny

    @property
    def diagonal(self):
        return StructuredSpec.DIAGONAL

    @property
    def num_nodes(self):
        return (self._nx + 1) * (self._ny + 1)

    @property
    def num_triangles(self):
        return 2 * self._nx * self._ny

    @property
    def spacing(self):
        """
        Smallest grid spacing
        """
        return min(self._Lx / self._nx, self._Ly / self._ny)

    def refine(self, times:int = 1):
        """
        Splits every rectangle into four, `times` times over.
        """
        if times < 0:
            raise ValueError("times should be a non negative integer!")
        factor = 2 ** times
        return StructuredSpec(self._Lx, self._Ly, self._nx * factor, self._ny * factor)

    def __eq__(self, other):
        if not isinstance(other, StructuredSpec):
            return NotImplemented
        return (self._Lx, self._Ly, self._nx, self._ny) == (other.Lx, other.Ly, other.nx, other.ny)

    def __hash__(self):
        return hash((self._Lx, self._Ly, self._nx, self._ny))

    def __repr__(self):
        return f"StructuredSpec(Lx={self._Lx}, Ly={self._Ly}, nx={self._nx}, ny={self._ny})"


class Mesh():
    """
    Immutable triangulation of the membrane in material coordinates (x0, y0).
    Node ids are the row indices of `coords`; triangles are CCW.
    """

    def __init__(self, coords, triangles, structure:StructuredSpec = None):
        coords = np.array(coords, dtype=float)
        triangles = np.array(triangles, dtype=np.int64)

        if coords.ndim != 2 or coords.shape[1] != 2 or coords.shape[0] == 0:
            raise MeshError("coords should be a non empty (N, 2) array")
        if triangles.ndim != 2 or triangles.shape[1] != 3 or triangles.shape[0] == 0:
            raise MeshError("triangles should be a non empty (E, 3) array")
        if structure is not None and not isinstance(structure, StructuredSpec):
            raise TypeError("structure should be a StructuredSpec")

        coords.setflags(write=False)
        triangles.setflags(write=False)
        self._coords = coords
        self._triangles = triangles
        self._structure = structure
        self._validate()

    @property
    def coords(self):
        """
        (N, 2) read-only array of (x0, y0)
        """
        return self._coords

    @property
    def triangles(self):
        """
        (E, 3) read-only array of CCW vertex ids
        """
        return self._triangles

    @property
    def structure(self):
        return self._structure

    @property
    def num_nodes(self):
        return self._coords.shape[0]

    @property
    def num_triangles(self):
        return self._triangles.shape[0]

    def node(self, node_id:int) -> Node:
        x0, y0 = self._coords[node_id]
        return Node(int(node_id), float(x0), float(y0))

    def triangle(self, triangle_id:int) -> Triangle:
        return Triangle(*(int(v) for v in self._triangles[triangle_id]))

    def nodes(self) -> list:
        return [self.node(node_id) for node_id in range(self.num_nodes)]

    def _validate(self):
        if not np.all(np.isfinite(self._coords)):
            raise MeshError("node coordinates should be finite")

        if self._triangles.min() < 0 or self._triangles.max() >= self.num_nodes:
            raise MeshError(f"triangle vertex ids should lie in [0, {self.num_nodes})")

        tri = self._triangles
        if np.any((tri[:, 0] == tri[:, 1]) | (tri[:, 1] == tri[:, 2]) | (tri[:, 0] == tri[:, 2])):
            raise MeshError("triangle vertices should be distinct")

        if np.unique(np.sort(tri, axis=1), axis=0).shape[0] != tri.shape[0]:
            raise MeshError("mesh contains duplicate triangles")

        areas = self.signed_areas()
        not_ccw = np.flatnonzero(areas <= 0)
        if not_ccw.size > 0:
            raise MeshError(f"triangle {int(not_ccw[0])} is not counter clockwise (signed area {areas[not_ccw[0]]:.3e})")

        if not self.is_edge_connected():
            raise MeshError("mesh is not edge connected")

    def signed_areas(self) -> np.ndarray:
        p = self._coords[self._triangles]
        return 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                      - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))

    def total_area(self) -> float:
        return float(self.signed_areas().sum())

    def centroids(self) -> np.ndarray:
        return self._coords[self._triangles].mean(axis=1)

    def edge_lengths(self) -> np.ndarray:
        p = self._coords[self._triangles]
        return np.linalg.norm(p - np.roll(p, -1, axis=1), axis=2)

    def min_edge_length(self) -> float:
        return float(self.edge_lengths().min())

    def max_extent(self) -> float:
        return float(np.ptp(self._coords, axis=0).max())

    def _unique_edges(self):
        edges = np.sort(self._triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
        return np.unique(edges, axis=0, return_inverse=True, return_counts=True)

    def is_edge_connected(self) -> bool:
        _, edge_of_side, _ = self._unique_edges()
        edge_of_side = np.asarray(edge_of_side).ravel()
        num_edges = int(edge_of_side.max()) + 1
        triangle_of_side = np.repeat(np.arange(self.num_triangles), 3)

        incidence = coo_matrix((np.ones(edge_of_side.size), (triangle_of_side, edge_of_side)),
                               shape=(self.num_triangles, num_edges)).tocsr()
        num_components, _ = connected_components(incidence @ incidence.T, directed=False)
        return num_components == 1

    def boundary_nodes(self) -> set:
        """
        Nodes on edges that belong to exactly one triangle
        """
        unique_edges, _, counts = self._unique_edges()
        return set(int(node_id) for node_id in np.unique(unique_edges[counts == 1]))

    def nearest_node(self, point) -> int:
        """
        Id of the node closest to point; ties go to the smallest id.
        """
        point = np.asarray(point, dtype=float)
        squared_distances = ((self._coords - point) ** 2).sum(axis=1)
        return int(np.argmin(squared_distances))

    def locate_nodes(self, points, tolerance:float) -> np.ndarray:
        """
        Ids of the nodes sitting at `points` (within `tolerance`).
        Raises SubsetLookupError if any point has no node.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        distances, ids = cKDTree(self._coords).query(points, k=1, distance_upper_bound=tolerance)
        missing = np.flatnonzero(~np.isfinite(distances))
        if missing.size > 0:
            x, y = points[missing[0]]
            raise SubsetLookupError(f"no node within {tolerance:.3e} of ({x!r}, {y!r}); "
                                    f"{missing.size} points missing")
        return ids.astype(np.int64)

    def central_element_pair(self) -> tuple:
        """
        The two triangles of rectangle (nx // 2, ny // 2), which holds the domain center.
        """
        if self._structure is None:
            raise MeshError("central_element_pair requires structured metadata")

        i = self._structure.nx // 2
        j = self._structure.ny // 2
        rectangle = j * self._structure.nx + i
        return (2 * rectangle, 2 * rectangle + 1)

    def mirror_node_map(self) -> np.ndarray:
        """
        node id -> id of its reflection about the split diagonal (square grids only).
        """
        spec = self._structure
        if spec is None:
            raise MeshError("mirror_node_map requires structured metadata")
        if spec.nx != spec.ny or spec.Lx != spec.Ly:
            raise MeshError("mirror_node_map requires a square grid with nx == ny")

        n = spec.nx + 1
        j, i = np.divmod(np.arange(self.num_nodes), n)
        return i * n + j

    @classmethod
    def generate_structured(cls, spec:StructuredSpec):
        nx, ny = spec.nx, spec.ny
        i, j = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1))
        x = i.ravel() * spec.Lx / nx
        y = j.ravel() * spec.Ly / ny
        coords = np.column_stack((x, y))

        ii, jj = np.meshgrid(np.arange(nx), np.arange(ny))
        n00 = (jj * (nx + 1) + ii).ravel()
        n10 = n00 + 1
        n01 = n00 + nx + 1
        n11 = n01 + 1

        lower = np.column_stack((n00, n10, n11))
        upper = np.column_stack((n00, n11, n01))
        triangles = np.stack((lower, upper), axis=1).reshape(-1, 3)

        logger.info(f"Generated {nx}x{ny} structured mesh: {coords.shape[0]} nodes, {triangles.shape[0]} triangles")
        return cls(coords, triangles, structure=spec)
