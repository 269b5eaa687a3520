import numpy as np


class DofMap():
    """
    Node i owns the global DOFs (3i, 3i+1, 3i+2) for (u, v, w).
    """

    DOFS_PER_NODE = 3

    def __init__(self, num_nodes:int):
        if isinstance(num_nodes, bool) or not isinstance(num_nodes, (int, np.integer)):
            raise TypeError("num_nodes should be an int!")
        if num_nodes < 1:
            raise ValueError("num_nodes should be positive")
        self._num_nodes = int(num_nodes)

    @property
    def num_nodes(self):
        return self._num_nodes

    @property
    def num_dofs(self):
        return DofMap.DOFS_PER_NODE * self._num_nodes

    def dofs_of(self, node_id:int) -> np.ndarray:
        if not 0 <= node_id < self._num_nodes:
            raise IndexError(f"node {node_id} is out of range [0, {self._num_nodes})")
        return DofMap.DOFS_PER_NODE * node_id + np.arange(DofMap.DOFS_PER_NODE)

    def dofs_of_nodes(self, node_ids) -> np.ndarray:
        node_ids = np.asarray(node_ids, dtype=np.int64)
        return (DofMap.DOFS_PER_NODE * node_ids[..., None] + np.arange(DofMap.DOFS_PER_NODE)).reshape(-1)

    def element_dofs(self, triangles) -> np.ndarray:
        """
        (E, 9) global DOFs of every triangle, vertex-major
        """
        triangles = np.asarray(triangles, dtype=np.int64)
        return (DofMap.DOFS_PER_NODE * triangles[..., None] + np.arange(DofMap.DOFS_PER_NODE)).reshape(triangles.shape[0], -1)

    def node_of(self, dof:int) -> int:
        return dof // DofMap.DOFS_PER_NODE

    def nodal(self, vector) -> np.ndarray:
        """
        (N, 3) view of a global vector
        """
        return np.asarray(vector).reshape(self._num_nodes, DofMap.DOFS_PER_NODE)
