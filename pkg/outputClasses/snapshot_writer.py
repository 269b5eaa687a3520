from assemblyClasses.assembler import Assembler
from collections import namedtuple
from pathlib import Path
from scenarioClasses.scenario_runner import Snapshot
import numpy as np
import logging
import csv

logger = logging.getLogger(__name__)

NODE_HEADER = ['t', 'node', 'x0', 'y0', 'u', 'v', 'w', 'vx', 'vy', 'vz', 'vmag']
ELEMENT_HEADER = ['t', 'element', 'exx', 'eyy', 'ezz', 'gxy', 'gyz', 'gxz',
                  'sxx', 'syy', 'szz', 'txy', 'tyz', 'txz', 'strain_flag', 'stress_flag']
VTK_TRIANGLE = 5

# Files written for one snapshot and the number of elements over a threshold
WrittenSnapshot = namedtuple('WrittenSnapshot', 'nodes_csv elements_csv vtk strain_flagged stress_flagged')


def fmt(value) -> str:
    return f"{value:.17g}"


class SnapshotWriter():
    """
    Writes a snapshot as node CSV, element CSV and a legacy VTK (ASCII) unstructured grid of
    the deformed membrane (x0 + u, y0 + v, w). Snapshot state is only read.
    """

    def __init__(self, directory, assembler:Assembler, prefix:str = 'snapshot'):
        if not isinstance(assembler, Assembler):
            raise TypeError("assembler should be an Assembler!")
        self._directory = Path(directory)
        self._assembler = assembler
        self._mesh = assembler.mesh
        self._prefix = prefix
        self._directory.mkdir(parents=True, exist_ok=True)

    @property
    def directory(self):
        return self._directory

    def _path(self, step:int, suffix:str) -> Path:
        return self._directory / f"{self._prefix}_{step:08d}{suffix}"

    def write(self, snapshot:Snapshot) -> WrittenSnapshot:
        displacement = np.asarray(snapshot.state.a).reshape(-1, 3)
        velocity = np.asarray(snapshot.state.adot).reshape(-1, 3)
        strain, stress, strain_flag, stress_flag = self._assembler.recover_fields(snapshot.state.a)

        nodes_csv = self.write_nodes_csv(self._path(snapshot.step, '_nodes.csv'), snapshot.t,
                                         displacement, velocity, snapshot.vmag)
        elements_csv = self.write_elements_csv(self._path(snapshot.step, '_elements.csv'), snapshot.t,
                                               strain, stress, strain_flag, stress_flag)
        vtk = self.write_vtk(self._path(snapshot.step, '.vtk'), snapshot.t, displacement, velocity,
                             snapshot.vmag, strain_flag, stress_flag)

        logger.debug(f"Wrote snapshot of step {snapshot.step} (t = {snapshot.t:.6e} s)")
        return WrittenSnapshot(nodes_csv, elements_csv, vtk, int(strain_flag.sum()), int(stress_flag.sum()))

    def write_nodes_csv(self, path, t:float, displacement, velocity, vmag) -> Path:
        coords = self._mesh.coords
        with open(path, 'w', newline='') as output_file:
            writer = csv.writer(output_file)
            writer.writerow(NODE_HEADER)
            for node in range(self._mesh.num_nodes):
                writer.writerow([fmt(t), node, fmt(coords[node, 0]), fmt(coords[node, 1]),
                                 *(fmt(value) for value in displacement[node]),
                                 *(fmt(value) for value in velocity[node]),
                                 fmt(vmag[node])])
        return Path(path)

    def write_elements_csv(self, path, t:float, strain, stress, strain_flag, stress_flag) -> Path:
        with open(path, 'w', newline='') as output_file:
            writer = csv.writer(output_file)
            writer.writerow(ELEMENT_HEADER)
            for element in range(self._mesh.num_triangles):
                writer.writerow([fmt(t), element,
                                 *(fmt(value) for value in strain[element]),
                                 *(fmt(value) for value in stress[element]),
                                 int(strain_flag[element]), int(stress_flag[element])])
        return Path(path)

    def write_vtk(self, path, t:float, displacement, velocity, vmag, strain_flag, stress_flag) -> Path:
        num_nodes = self._mesh.num_nodes
        num_triangles = self._mesh.num_triangles
        points = np.column_stack((self._mesh.coords + displacement[:, :2], displacement[:, 2]))

        lines = ["# vtk DataFile Version 3.0",
                 f"membrane snapshot t={fmt(t)}",
                 "ASCII",
                 "DATASET UNSTRUCTURED_GRID",
                 f"POINTS {num_nodes} double"]
        lines.extend(' '.join(fmt(value) for value in point) for point in points)

        lines.append(f"CELLS {num_triangles} {4 * num_triangles}")
        lines.extend(f"3 {m} {n} {p}" for m, n, p in self._mesh.triangles)
        lines.append(f"CELL_TYPES {num_triangles}")
        lines.extend([str(VTK_TRIANGLE)] * num_triangles)

        lines.append(f"POINT_DATA {num_nodes}")
        lines.extend(["SCALARS vmag double 1", "LOOKUP_TABLE default"])
        lines.extend(fmt(value) for value in vmag)
        lines.append("VECTORS velocity double")
        lines.extend(' '.join(fmt(value) for value in row) for row in velocity)
        lines.append("VECTORS displacement double")
        lines.extend(' '.join(fmt(value) for value in row) for row in displacement)

        lines.append(f"CELL_DATA {num_triangles}")
        for name, flags in (('strain_flag', strain_flag), ('stress_flag', stress_flag)):
            lines.extend([f"SCALARS {name} int 1", "LOOKUP_TABLE default"])
            lines.extend(str(int(flag)) for flag in flags)

        with open(path, 'w') as output_file:
            output_file.write('\n'.join(lines) + '\n')
        return Path(path)
