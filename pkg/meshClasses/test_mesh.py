from unittest import TestCase, main
from errorClasses.errors import MeshError, SubsetLookupError
from meshClasses.mesh import Mesh, Node, StructuredSpec, Triangle
import numpy as np


class TestStructuredSpec(TestCase):

    def test_counts(self):
        spec = StructuredSpec(2.0, 1.0, 4, 2)

        self.assertEqual(spec.num_nodes, 15)
        self.assertEqual(spec.num_triangles, 16)
        self.assertEqual(spec.spacing, 0.5)

    def test_refine_doubles_both_directions(self):
        spec = StructuredSpec(1.0, 1.0, 3, 5).refine(2)

        self.assertEqual((spec.nx, spec.ny), (12, 20))
        self.assertEqual(spec, StructuredSpec(1.0, 1.0, 12, 20))

    def test_rejects_bad_values(self):
        with self.assertRaises(ValueError):
            StructuredSpec(0.0, 1.0, 2, 2)
        with self.assertRaises(ValueError):
            StructuredSpec(1.0, 1.0, 0, 2)
        with self.assertRaises(TypeError):
            StructuredSpec(1.0, 1.0, 2.5, 2)


class TestMesh(TestCase):

    def setUp(self):
        self.mesh = Mesh.generate_structured(StructuredSpec(1.0, 1.0, 2, 2))

    def test_generate_structured_counts(self):
        self.assertEqual(self.mesh.num_nodes, 9)
        self.assertEqual(self.mesh.num_triangles, 8)

    def test_node_numbering_is_row_major(self):
        self.assertEqual(self.mesh.node(5), Node(5, 1.0, 0.5))
        self.assertEqual(self.mesh.node(6), Node(6, 0.0, 1.0))

    def test_diagonal_split(self):
        self.assertEqual(self.mesh.triangle(0), Triangle(0, 1, 4))
        self.assertEqual(self.mesh.triangle(1), Triangle(0, 4, 3))

    def test_triangles_are_ccw_and_tile_the_domain(self):
        self.assertTrue(np.all(self.mesh.signed_areas() > 0))
        self.assertAlmostEqual(self.mesh.total_area(), 1.0, places=14)

    def test_arrays_are_read_only(self):
        with self.assertRaises(ValueError):
            self.mesh.coords[0, 0] = 3.0
        with self.assertRaises(ValueError):
            self.mesh.triangles[0, 0] = 2

    def test_central_element_pair(self):
        self.assertEqual(self.mesh.central_element_pair(), (6, 7))

        mesh = Mesh.generate_structured(StructuredSpec(1.0, 1.0, 4, 4))
        centroids = mesh.centroids()[list(mesh.central_element_pair())]
        self.assertTrue(np.all(np.abs(centroids - 0.5) < 0.25))

    def test_central_element_pair_needs_structure(self):
        mesh = Mesh(self.mesh.coords, self.mesh.triangles)

        with self.assertRaises(MeshError):
            mesh.central_element_pair()

    def test_nearest_node(self):
        self.assertEqual(self.mesh.nearest_node((0.5, 0.5)), 4)
        self.assertEqual(self.mesh.nearest_node((0.9, 0.05)), 2)

    def test_boundary_nodes(self):
        self.assertSetEqual(self.mesh.boundary_nodes(), {0, 1, 2, 3, 5, 6, 7, 8})

    def test_min_edge_length(self):
        self.assertAlmostEqual(self.mesh.min_edge_length(), 0.5)

    def test_mirror_node_map_is_an_involution(self):
        mirror = self.mesh.mirror_node_map()

        self.assertEqual(mirror[1], 3)
        self.assertTrue(np.array_equal(mirror[mirror], np.arange(self.mesh.num_nodes)))
        np.testing.assert_array_equal(self.mesh.coords[mirror], self.mesh.coords[:, ::-1])

    def test_locate_nodes_on_refined_grid(self):
        base = StructuredSpec(1.0, 1.0, 4, 4)
        fine = Mesh.generate_structured(base.refine(3))
        coarse = Mesh.generate_structured(base)

        ids = fine.locate_nodes(coarse.coords, 1e-12 * base.refine(3).spacing)

        np.testing.assert_array_equal(fine.coords[ids], coarse.coords)

    def test_locate_nodes_fails_off_grid(self):
        with self.assertRaises(SubsetLookupError):
            self.mesh.locate_nodes([(0.25, 0.25)], 1e-12)

    def test_rejects_clockwise_triangle(self):
        with self.assertRaises(MeshError):
            Mesh([(0, 0), (1, 0), (0, 1)], [(0, 2, 1)])

    def test_rejects_out_of_range_ids(self):
        with self.assertRaises(MeshError):
            Mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 3)])

    def test_rejects_duplicate_triangles(self):
        with self.assertRaises(MeshError):
            Mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2), (1, 2, 0)])

    def test_rejects_disconnected_mesh(self):
        coords = [(0, 0), (1, 0), (0, 1), (5, 5), (6, 5), (5, 6)]

        with self.assertRaises(MeshError):
            Mesh(coords, [(0, 1, 2), (3, 4, 5)])

    def test_vertex_sharing_is_not_edge_connected(self):
        coords = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]

        with self.assertRaises(MeshError):
            Mesh(coords, [(0, 1, 2), (0, 3, 4)])


if __name__ == '__main__':
    main()
