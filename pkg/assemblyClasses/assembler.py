from assemblyClasses.dof_map import DofMap
from assemblyClasses.global_system import GlobalSystem
from assemblyClasses.load_model import ElementLoad, LoadModel
from collections import namedtuple
from elementClasses.triangle_element import TriangleElement
from errorClasses.errors import AssemblyError
from materialClasses.material import MaterialParams
from meshClasses.mesh import Mesh
from scipy.sparse import coo_matrix
import numpy as np
import logging

logger = logging.getLogger(__name__)

# Per-element matrices, batched over a leading element axis
ElementMatrices = namedtuple('ElementMatrices', 'Ke Me fe B')


class Assembler():
    """
    Evaluates the element kernels for the whole mesh at once and scatters them
    into global sparse K, M and load vectors.
    """

    def __init__(self, mesh:Mesh, materials):
        if not isinstance(mesh, Mesh):
            raise TypeError("mesh should be a Mesh!")
        self._mesh = mesh
        self._dof_map = DofMap(mesh.num_nodes)
        self._materials = self._per_element_materials(materials)

        num_triangles = mesh.num_triangles
        self._rho = np.array([material.rho for material in self._materials])
        self._h = np.array([material.h for material in self._materials])
        self._D = np.array([material.D.d for material in self._materials])

        self._shape = TriangleElement.shape_coefficients(mesh.coords[mesh.triangles], np.arange(num_triangles))
        self._area = self._shape.area
        self._B = TriangleElement.strain_displacement(self._shape)
        self._Ke = TriangleElement.element_stiffness(self._B, self._D, self._h, self._area)
        self._Me = TriangleElement.element_mass(self._rho, self._h, self._area)
        self._element_dofs = self._dof_map.element_dofs(mesh.triangles)

    @property
    def mesh(self):
        return self._mesh

    @property
    def dof_map(self):
        return self._dof_map

    @property
    def materials(self):
        """
        One MaterialParams per triangle
        """
        return self._materials

    @property
    def areas(self):
        return self._area

    @property
    def shape_coefficients(self):
        return self._shape

    def _per_element_materials(self, materials) -> list:
        if isinstance(materials, MaterialParams):
            return [materials] * self._mesh.num_triangles

        materials = list(materials)
        if len(materials) != self._mesh.num_triangles:
            raise AssemblyError(f"got {len(materials)} materials for {self._mesh.num_triangles} triangles")
        for material in materials:
            if not isinstance(material, MaterialParams):
                raise TypeError("materials should be MaterialParams!")
        return materials

    def element_matrices(self, b=None) -> ElementMatrices:
        b = self._checked_element_b(b)
        return ElementMatrices(self._Ke, self._Me, TriangleElement.element_load(b, self._h, self._area), self._B)

    def _checked_element_b(self, b) -> np.ndarray:
        if b is None:
            return np.zeros((self._mesh.num_triangles, 3))
        b = np.asarray(b, dtype=float)
        if b.shape != (self._mesh.num_triangles, 3):
            raise AssemblyError(f"element loads should have shape ({self._mesh.num_triangles}, 3), got {b.shape}")
        return b

    def _scatter_matrix(self, element_matrices) -> coo_matrix:
        num_dofs = self._dof_map.num_dofs
        num_elements = self._element_dofs.shape[0]
        rows = np.broadcast_to(self._element_dofs[:, :, None], (num_elements, 9, 9)).ravel()
        cols = np.broadcast_to(self._element_dofs[:, None, :], (num_elements, 9, 9)).ravel()
        matrix = coo_matrix((element_matrices.ravel(), (rows, cols)), shape=(num_dofs, num_dofs)).tocsr()
        # (a + b) / 2 is order independent, so the result is bitwise symmetric
        return ((matrix + matrix.T) * 0.5).tocsr()

    def scatter_vector(self, element_vectors) -> np.ndarray:
        element_vectors = np.asarray(element_vectors, dtype=float)
        if element_vectors.shape != self._element_dofs.shape:
            raise AssemblyError(f"element vectors should have shape {self._element_dofs.shape}, got {element_vectors.shape}")
        vector = np.zeros(self._dof_map.num_dofs)
        np.add.at(vector, self._element_dofs.ravel(), element_vectors.ravel())
        return vector

    def load_vector(self, b) -> np.ndarray:
        """
        Global f = -sum_e N^T b_e for per-element force densities b (E, 3).
        """
        b = self._checked_element_b(b)
        return self.scatter_vector(TriangleElement.element_load(b, self._h, self._area))

    def assemble(self, element_loads=()) -> GlobalSystem:
        K = self._scatter_matrix(self._Ke)
        M = self._scatter_matrix(self._Me)

        load_model = LoadModel(self._dof_map.num_dofs)
        for element_load in element_loads:
            if not isinstance(element_load, ElementLoad):
                raise TypeError("element_loads should hold ElementLoad items")
            load_model.add(self.load_vector(element_load.b), element_load.t_start, element_load.t_end)

        logger.info(f"Assembled {self._dof_map.num_dofs} DOFs from {self._mesh.num_triangles} triangles: "
                    f"nnz(K)={K.nnz}, nnz(M)={M.nnz}, {load_model.num_terms} load terms")
        return GlobalSystem(K, M, load_model, self._dof_map)

    def element_values(self, vector) -> np.ndarray:
        """
        (E, 9) gather of a global vector
        """
        return np.asarray(vector)[self._element_dofs]

    def recover_fields(self, a) -> tuple:
        """
        Per-element (strain (E, 6), stress (E, 6), strain_flag (E,), stress_flag (E,)).
        """
        strain, stress = TriangleElement.recover_stress_strain(self._shape, self._D, self.element_values(a))
        strain_flag = np.zeros(self._mesh.num_triangles, dtype=bool)
        stress_flag = np.zeros(self._mesh.num_triangles, dtype=bool)
        for material in set(self._materials):
            members = np.array([element_material is material for element_material in self._materials])
            strain_flag[members], stress_flag[members] = TriangleElement.threshold_flags(
                strain[members], stress[members], material.strain_threshold, material.stress_threshold)
        return strain, stress, strain_flag, stress_flag

    def residual(self, a, addot, b=None) -> np.ndarray:
        """
        Sum over elements of the balancing nodal forces q_e.
        """
        b = self._checked_element_b(b)
        fe = TriangleElement.element_load(b, self._h, self._area)
        q = TriangleElement.nodal_forces(self._Ke, self._Me, fe, self.element_values(a), self.element_values(addot))
        return self.scatter_vector(q)
