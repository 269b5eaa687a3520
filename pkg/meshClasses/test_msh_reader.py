from unittest import TestCase, main
from errorClasses.errors import MshParseError
from meshClasses.mesh import Mesh, StructuredSpec
from meshClasses.msh_reader import MshReader
import numpy as np
import tempfile
import pathlib


def msh_text(nodes, elements, version='2.2', file_type='0', extra=''):
    """
    nodes: [(tag, x, y, z)], elements: [(tag, type, [vertex tags])]
    """
    lines = ['$MeshFormat', f'{version} {file_type} 8', '$EndMeshFormat']
    if extra:
        lines.append(extra)
    lines += ['$Nodes', str(len(nodes))]
    lines += [f'{tag} {x} {y} {z}' for tag, x, y, z in nodes]
    lines += ['$EndNodes', '$Elements', str(len(elements))]
    lines += [f'{tag} {kind} 2 0 1 ' + ' '.join(str(v) for v in vertices) for tag, kind, vertices in elements]
    lines += ['$EndElements']
    return '\n'.join(lines) + '\n'


def structured_msh_text(mesh:Mesh) -> str:
    """
    Gmsh 2.2 text for a mesh, node tags given in reverse order so the reader has to relabel.
    """
    num_nodes = mesh.num_nodes
    tags = [2 * (num_nodes - node) + 1 for node in range(num_nodes)]
    nodes = [(tags[node], x, y, 0.0) for node, (x, y) in enumerate(mesh.coords.tolist())]
    elements = [(index + 1, 2, [tags[node] for node in triangle])
                for index, triangle in enumerate(mesh.triangles.tolist())]
    return msh_text(nodes, elements)


def triangle_set(mesh:Mesh) -> set:
    coords = [tuple(point) for point in mesh.coords.tolist()]
    return {frozenset(coords[node] for node in triangle) for triangle in mesh.triangles.tolist()}


SQUARE_NODES = [(10, 0.0, 0.0, 0.0), (20, 1.0, 0.0, 0.0), (30, 1.0, 1.0, 0.0), (40, 0.0, 1.0, 0.0)]
SQUARE_ELEMENTS = [(1, 15, [10]), (2, 1, [10, 20]), (3, 2, [10, 20, 30]), (4, 2, [10, 30, 40])]


class TestMshReader(TestCase):

    def test_reads_square(self):
        mesh = MshReader.read(msh_text(SQUARE_NODES, SQUARE_ELEMENTS))

        self.assertEqual(mesh.num_nodes, 4)
        self.assertEqual(mesh.num_triangles, 2)
        self.assertAlmostEqual(mesh.total_area(), 1.0)
        self.assertIsNone(mesh.structure)

    def test_node_tags_are_remapped_in_sorted_order(self):
        mesh = MshReader.read(msh_text(SQUARE_NODES, SQUARE_ELEMENTS))

        np.testing.assert_array_equal(mesh.coords, [[0, 0], [1, 0], [1, 1], [0, 1]])
        np.testing.assert_array_equal(mesh.triangles, [[0, 1, 2], [0, 2, 3]])

    def test_clockwise_triangles_are_reoriented(self):
        elements = [(1, 2, [10, 30, 20]), (2, 2, [10, 40, 30])]

        mesh = MshReader.read(msh_text(SQUARE_NODES, elements))

        self.assertTrue(np.all(mesh.signed_areas() > 0))

    def test_orphan_nodes_are_dropped(self):
        nodes = SQUARE_NODES + [(50, 5.0, 5.0, 0.0)]

        mesh = MshReader.read(msh_text(nodes, SQUARE_ELEMENTS))

        self.assertEqual(mesh.num_nodes, 4)

    def test_unknown_sections_are_skipped(self):
        extra = '$PhysicalNames\n1\n2 1 "membrane"\n$EndPhysicalNames'

        mesh = MshReader.read(msh_text(SQUARE_NODES, SQUARE_ELEMENTS, extra=extra))

        self.assertEqual(mesh.num_triangles, 2)

    def test_reads_file(self):
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = pathlib.Path(tmp_dir) / 'square.msh'
            path.write_text(msh_text(SQUARE_NODES, SQUARE_ELEMENTS))

            mesh = MshReader.read_file(path)

        self.assertEqual(mesh.num_triangles, 2)

    def test_structured_mesh_survives_write_and_read(self):
        mesh = Mesh.generate_structured(StructuredSpec(1.0, 1.0, 2, 2))

        reread = MshReader.read(structured_msh_text(mesh))

        self.assertEqual(reread.num_nodes, mesh.num_nodes)
        self.assertEqual(reread.num_triangles, mesh.num_triangles)
        self.assertEqual({tuple(point) for point in reread.coords.tolist()},
                         {tuple(point) for point in mesh.coords.tolist()})
        self.assertEqual(triangle_set(reread), triangle_set(mesh))
        self.assertTrue(np.all(reread.signed_areas() > 0))
        self.assertAlmostEqual(reread.total_area(), mesh.total_area())

    def test_rejects_binary_flag(self):
        with self.assertRaises(MshParseError):
            MshReader.read(msh_text(SQUARE_NODES, SQUARE_ELEMENTS, file_type='1'))

    def test_rejects_binary_bytes(self):
        with self.assertRaises(MshParseError):
            MshReader.read(b'$MeshFormat\n2.2 0 8\n\xff\xfe\n')

    def test_rejects_version_4(self):
        with self.assertRaises(MshParseError):
            MshReader.read(msh_text(SQUARE_NODES, SQUARE_ELEMENTS, version='4.1'))

    def test_rejects_quadrangles_with_line_number(self):
        elements = SQUARE_ELEMENTS + [(5, 3, [10, 20, 30, 40])]

        with self.assertRaises(MshParseError) as context:
            MshReader.read(msh_text(SQUARE_NODES, elements))

        self.assertEqual(context.exception.line_number, 17)
        self.assertIn('unsupported element type 3', str(context.exception))

    def test_rejects_unknown_node_reference(self):
        elements = [(1, 2, [10, 20, 99])]

        with self.assertRaises(MshParseError):
            MshReader.read(msh_text(SQUARE_NODES, elements))

    def test_rejects_non_planar_mesh(self):
        nodes = [(10, 0.0, 0.0, 0.0), (20, 1.0, 0.0, 0.0), (30, 1.0, 1.0, 0.5), (40, 0.0, 1.0, 0.0)]

        with self.assertRaises(MshParseError):
            MshReader.read(msh_text(nodes, SQUARE_ELEMENTS))

    def test_rejects_missing_sections(self):
        with self.assertRaises(MshParseError):
            MshReader.read('$MeshFormat\n2.2 0 8\n$EndMeshFormat\n')

    def test_rejects_unclosed_nodes(self):
        text = '$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0 0\n'

        with self.assertRaises(MshParseError):
            MshReader.read(text)


if __name__ == '__main__':
    main()
