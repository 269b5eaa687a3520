from errorClasses.errors import MshParseError
from meshClasses.mesh import Mesh
import numpy as np
import pathlib
import logging

logger = logging.getLogger(__name__)


class MshReader():
    """
    Reader for the ASCII gmsh MSH 2.2 format. Only 3-node triangles are imported.
    """

    TRIANGLE_TYPE = 2
    SKIPPED_TYPES = {1: 'line', 15: 'point'}
    PLANARITY_TOLERANCE = 1e-9

    @classmethod
    def read_file(cls, path) -> Mesh:
        with open(pathlib.Path(path), 'rb') as msh_file:
            return cls.read(msh_file.read())

    @classmethod
    def read(cls, data) -> Mesh:
        if isinstance(data, (bytes, bytearray)):
            try:
                text = bytes(data).decode('ascii')
            except UnicodeDecodeError:
                raise MshParseError("binary MSH format is not supported, re-export as ASCII")
        elif isinstance(data, str):
            text = data
        else:
            raise TypeError("data should be bytes or str")

        lines = text.splitlines()
        nodes = None
        triangles = None
        format_seen = False

        line_idx = cls._next_content_line(lines, 0)
        while line_idx < len(lines):
            header = lines[line_idx].strip()
            if header == '$MeshFormat':
                line_idx = cls._read_mesh_format(lines, line_idx + 1)
                format_seen = True
            elif header == '$Nodes':
                nodes, line_idx = cls._read_nodes(lines, line_idx + 1)
            elif header == '$Elements':
                triangles, line_idx = cls._read_elements(lines, line_idx + 1)
            elif header.startswith('$') and not header.startswith('$End'):
                line_idx = cls._skip_section(lines, line_idx, header[1:])
            else:
                raise MshParseError(f"expected a section header, got '{header}'", line_idx + 1)
            line_idx = cls._next_content_line(lines, line_idx)

        if not format_seen:
            raise MshParseError("missing $MeshFormat section")
        if nodes is None:
            raise MshParseError("missing $Nodes section")
        if triangles is None:
            raise MshParseError("missing $Elements section")
        if len(triangles) == 0:
            raise MshParseError("no 3-node triangles found")

        return cls._build_mesh(nodes, triangles)

    @classmethod
    def _next_content_line(cls, lines:list, line_idx:int) -> int:
        while line_idx < len(lines) and lines[line_idx].strip() == '':
            line_idx += 1
        return line_idx

    @classmethod
    def _expect(cls, lines:list, line_idx:int, expected:str) -> int:
        if line_idx >= len(lines) or lines[line_idx].strip() != expected:
            got = lines[line_idx].strip() if line_idx < len(lines) else 'end of file'
            raise MshParseError(f"expected '{expected}', got '{got}'", line_idx + 1)
        return line_idx + 1

    @classmethod
    def _read_count(cls, lines:list, line_idx:int, section:str) -> int:
        if line_idx >= len(lines):
            raise MshParseError(f"unexpected end of file in {section}", line_idx + 1)
        try:
            count = int(lines[line_idx].strip())
        except ValueError:
            raise MshParseError(f"malformed {section} count '{lines[line_idx].strip()}'", line_idx + 1)
        if count < 0:
            raise MshParseError(f"negative {section} count", line_idx + 1)
        return count

    @classmethod
    def _read_mesh_format(cls, lines:list, line_idx:int) -> int:
        if line_idx >= len(lines):
            raise MshParseError("unexpected end of file in $MeshFormat", line_idx + 1)
        fields = lines[line_idx].split()
        if len(fields) != 3:
            raise MshParseError(f"malformed $MeshFormat line '{lines[line_idx].strip()}'", line_idx + 1)

        version, file_type = fields[0], fields[1]
        if file_type == '1':
            raise MshParseError("binary MSH format is not supported, re-export as ASCII", line_idx + 1)
        if file_type != '0':
            raise MshParseError(f"unknown MSH file type '{file_type}'", line_idx + 1)
        if not version.startswith('2.'):
            raise MshParseError(f"unsupported MSH version {version}, expected 2.2", line_idx + 1)

        return cls._expect(lines, line_idx + 1, '$EndMeshFormat')

    @classmethod
    def _read_nodes(cls, lines:list, line_idx:int) -> tuple:
        count = cls._read_count(lines, line_idx, '$Nodes')
        nodes = dict()
        for line_idx in range(line_idx + 1, line_idx + 1 + count):
            if line_idx >= len(lines):
                raise MshParseError("unexpected end of file in $Nodes", line_idx + 1)
            fields = lines[line_idx].split()
            try:
                tag = int(fields[0])
                x, y, z = (float(value) for value in fields[1:4])
            except (ValueError, IndexError):
                raise MshParseError(f"malformed node line '{lines[line_idx].strip()}'", line_idx + 1)
            if len(fields) != 4:
                raise MshParseError(f"malformed node line '{lines[line_idx].strip()}'", line_idx + 1)
            if tag in nodes:
                raise MshParseError(f"duplicate node tag {tag}", line_idx + 1)
            nodes[tag] = (x, y, z)

        return nodes, cls._expect(lines, line_idx + 1, '$EndNodes')

    @classmethod
    def _read_elements(cls, lines:list, line_idx:int) -> tuple:
        count = cls._read_count(lines, line_idx, '$Elements')
        triangles = list()
        for line_idx in range(line_idx + 1, line_idx + 1 + count):
            if line_idx >= len(lines):
                raise MshParseError("unexpected end of file in $Elements", line_idx + 1)
            try:
                fields = [int(value) for value in lines[line_idx].split()]
                element_type, num_tags = fields[1], fields[2]
            except (ValueError, IndexError):
                raise MshParseError(f"malformed element line '{lines[line_idx].strip()}'", line_idx + 1)

            vertices = fields[3 + num_tags:]
            if element_type in MshReader.SKIPPED_TYPES:
                continue
            if element_type != MshReader.TRIANGLE_TYPE:
                raise MshParseError(f"unsupported element type {element_type}", line_idx + 1)
            if len(vertices) != 3:
                raise MshParseError(f"triangle should have 3 nodes, got {len(vertices)}", line_idx + 1)
            triangles.append((tuple(vertices), line_idx + 1))

        return triangles, cls._expect(lines, line_idx + 1, '$EndElements')

    @classmethod
    def _skip_section(cls, lines:list, line_idx:int, name:str) -> int:
        end_marker = f'$End{name}'
        start = line_idx
        while line_idx < len(lines) and lines[line_idx].strip() != end_marker:
            line_idx += 1
        if line_idx == len(lines):
            raise MshParseError(f"section ${name} is never closed", start + 1)
        logger.info(f"Skipped MSH section ${name}")
        return line_idx + 1

    @classmethod
    def _build_mesh(cls, nodes:dict, triangles:list) -> Mesh:
        for vertices, line_number in triangles:
            for tag in vertices:
                if tag not in nodes:
                    raise MshParseError(f"element references unknown node {tag}", line_number)

        used_tags = sorted(set(tag for vertices, _ in triangles for tag in vertices))
        orphan_count = len(nodes) - len(used_tags)
        if orphan_count > 0:
            logger.warning(f"Dropped {orphan_count} nodes not used by any triangle")

        dense_id = {tag: node_id for node_id, tag in enumerate(used_tags)}
        xyz = np.array([nodes[tag] for tag in used_tags], dtype=float)

        extent = float(np.ptp(xyz[:, :2], axis=0).max())
        if np.abs(xyz[:, 2]).max() >= MshReader.PLANARITY_TOLERANCE * extent:
            raise MshParseError(f"non-planar mesh: max |z| = {np.abs(xyz[:, 2]).max():.3e}")

        connectivity = np.array([[dense_id[tag] for tag in vertices] for vertices, _ in triangles], dtype=np.int64)
        coords = xyz[:, :2]

        p = coords[connectivity]
        signed = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                  - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
        clockwise = signed < 0
        if clockwise.any():
            connectivity[clockwise] = connectivity[clockwise][:, [0, 2, 1]]
            logger.info(f"Reoriented {int(clockwise.sum())} clockwise triangles")

        logger.info(f"Read MSH mesh: {coords.shape[0]} nodes, {connectivity.shape[0]} triangles")
        return Mesh(coords, connectivity)
