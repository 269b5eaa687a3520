from unittest import TestCase, main
from assemblyClasses.assembler import Assembler
from elementClasses.triangle_element import TriangleElement
from errorClasses.errors import AssemblyError
from materialClasses.material import ElasticMatrix, MaterialParams
from meshClasses.mesh import Mesh, StructuredSpec
import numpy as np

LAYERED_ENTRIES = [(1, 1, 150), (1, 2, 40), (1, 3, 10), (2, 2, 150), (2, 3, 80), (3, 3, 150),
                   (4, 4, 80), (5, 5, 20), (6, 6, 30)]


def dense_assembly(mesh, material):
    """
    Element by element loop into dense matrices.
    """
    num_dofs = 3 * mesh.num_nodes
    K = np.zeros((num_dofs, num_dofs))
    M = np.zeros((num_dofs, num_dofs))
    for triangle in mesh.triangles:
        sc = TriangleElement.shape_coefficients(mesh.coords[triangle])
        B = TriangleElement.strain_displacement(sc)
        Ke = TriangleElement.element_stiffness(B, material.D.d, material.h, sc.area)
        Me = TriangleElement.element_mass(material.rho, material.h, sc.area)
        dofs = [3 * node + direction for node in triangle for direction in range(3)]
        for i in range(9):
            for j in range(9):
                K[dofs[i], dofs[j]] += Ke[i, j]
                M[dofs[i], dofs[j]] += Me[i, j]
    return K, M


class TestAssembler(TestCase):

    def setUp(self):
        coords = [(0.0, 0.0), (1.0, 0.0), (2.1, 0.2), (0.1, 1.0), (1.2, 1.1), (2.0, 1.3), (0.9, 2.2)]
        triangles = [(0, 1, 4), (0, 4, 3), (1, 2, 5), (1, 5, 4), (3, 4, 6), (4, 5, 6)]
        self.mesh = Mesh(coords, triangles)
        self.material = MaterialParams(1500.0, 2e-3, ElasticMatrix.from_entries(LAYERED_ENTRIES))
        self.assembler = Assembler(self.mesh, self.material)
        self.system = self.assembler.assemble()

    def test_matches_dense_assembly(self):
        K_dense, M_dense = dense_assembly(self.mesh, self.material)

        np.testing.assert_allclose(self.system.K.toarray(), K_dense, rtol=1e-13, atol=1e-13 * np.abs(K_dense).max())
        np.testing.assert_allclose(self.system.M.toarray(), M_dense, rtol=1e-13, atol=1e-13 * np.abs(M_dense).max())

    def test_matches_dense_assembly_on_structured_grid(self):
        mesh = Mesh.generate_structured(StructuredSpec(1.0, 0.5, 4, 3))
        K = Assembler(mesh, self.material).assemble().K.toarray()
        K_dense, _ = dense_assembly(mesh, self.material)

        np.testing.assert_allclose(K, K_dense, rtol=1e-13, atol=1e-13 * np.abs(K_dense).max())

    def test_element_matrices_match_single_triangles(self):
        b = np.random.default_rng(5).normal(size=(self.mesh.num_triangles, 3)) * 1e5

        matrices = self.assembler.element_matrices(b)

        self.assertEqual(matrices.Ke.shape, (self.mesh.num_triangles, 9, 9))
        for index, triangle in enumerate(self.mesh.triangles):
            sc = TriangleElement.shape_coefficients(self.mesh.coords[triangle])
            B = TriangleElement.strain_displacement(sc)
            Ke = TriangleElement.element_stiffness(B, self.material.D.d, self.material.h, sc.area)
            Me = TriangleElement.element_mass(self.material.rho, self.material.h, sc.area)
            np.testing.assert_allclose(matrices.Ke[index], Ke, rtol=1e-13, atol=1e-13 * np.abs(Ke).max())
            np.testing.assert_allclose(matrices.Me[index], Me, rtol=1e-13)
            np.testing.assert_allclose(matrices.B[index], B, rtol=1e-13, atol=1e-13 * np.abs(B).max())
        np.testing.assert_allclose(self.assembler.scatter_vector(matrices.fe), self.assembler.load_vector(b), rtol=1e-13)

    def test_element_matrices_default_to_zero_load(self):
        matrices = self.assembler.element_matrices()

        np.testing.assert_array_equal(matrices.fe, 0.0)
        with self.assertRaises(AssemblyError):
            self.assembler.element_matrices(np.zeros((2, 3)))

    def test_global_matrices_are_exactly_symmetric(self):
        self.assertEqual((self.system.K != self.system.K.T).nnz, 0)
        self.assertEqual((self.system.M != self.system.M.T).nnz, 0)

    def test_total_mass(self):
        for direction in range(3):
            ones = np.zeros(self.system.num_dofs)
            ones[direction::3] = 1.0
            total = ones @ (self.system.M @ ones)
            self.assertAlmostEqual(total / (self.material.rho * self.material.h * self.mesh.total_area()), 1.0, places=12)

    def test_rigid_translations_are_free(self):
        scale = abs(self.system.K).max()
        for direction in range(3):
            translation = np.zeros(self.system.num_dofs)
            translation[direction::3] = 1.0
            np.testing.assert_allclose(self.system.K @ translation, 0.0, atol=1e-12 * scale)

    def test_load_vector_total(self):
        b = np.zeros((self.mesh.num_triangles, 3))
        b[:, 2] = 2e5

        f = self.assembler.load_vector(b)

        expected = -self.material.h * self.mesh.total_area() * 2e5
        self.assertAlmostEqual(f[2::3].sum() / expected, 1.0, places=12)
        np.testing.assert_array_equal(f[0::3], 0.0)

    def test_residual_is_sum_of_element_forces(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=self.system.num_dofs) * 1e-6
        addot = rng.normal(size=self.system.num_dofs)
        b = rng.normal(size=(self.mesh.num_triangles, 3)) * 1e5

        expected = self.system.M @ addot + self.system.K @ a + self.assembler.load_vector(b)
        residual = self.assembler.residual(a, addot, b)

        np.testing.assert_allclose(residual, expected, rtol=1e-10, atol=1e-10 * np.abs(expected).max())

    def test_recover_fields_for_linear_field(self):
        coords = self.mesh.coords
        a = np.column_stack((1e-3 * coords[:, 0], -2e-3 * coords[:, 1], 5e-4 * coords[:, 0])).ravel()

        strain, stress, strain_flag, stress_flag = self.assembler.recover_fields(a)

        np.testing.assert_allclose(strain[:, 0], 1e-3, rtol=1e-10)
        np.testing.assert_allclose(strain[:, 1], -2e-3, rtol=1e-10)
        np.testing.assert_allclose(strain[:, 5], 5e-4, rtol=1e-10)
        self.assertFalse(strain_flag.any() or stress_flag.any())

    def test_per_element_materials(self):
        soft = MaterialParams(1500.0, 2e-3, ElasticMatrix.from_entries(LAYERED_ENTRIES).scaled(0.5))
        materials = [self.material] * 3 + [soft] * 3

        K = Assembler(self.mesh, materials).assemble().K
        K_soft = Assembler(self.mesh, soft).assemble().K

        self.assertLess(abs(K_soft).max(), abs(self.system.K).max())
        self.assertEqual(K.shape, self.system.K.shape)

    def test_rejects_wrong_material_count(self):
        with self.assertRaises(AssemblyError):
            Assembler(self.mesh, [self.material] * 2)

    def test_rejects_wrong_load_shape(self):
        with self.assertRaises(AssemblyError):
            self.assembler.load_vector(np.zeros((2, 3)))


if __name__ == '__main__':
    main()
