from unittest import TestCase, main
from errorClasses.errors import ConfigurationError, MaterialError
from scenarioClasses.scenario_config import ScenarioConfigReader
import tempfile
import pathlib
import json
import copy

CASE_1 = {
    'name': 'unit',
    'mesh': {'Lx': 1.0, 'Ly': 1.0, 'nx': 4, 'ny': 4},
    'material': {'type': 'isotropic', 'E': 70e9, 'nu': 0.3, 'rho': 2700.0, 'h': 0.001},
    'case': {'id': 1, 'params': {'b0': 5e7, 'window': [0.0, 2e-6]}},
    'border': 'fixed',
    'T': 1e-5,
    'output': {'every_n_steps': 5, 'directory': 'out'}
}


class TestScenarioConfigReader(TestCase):

    def setUp(self):
        self.data = copy.deepcopy(CASE_1)

    def test_reads_numbered_case(self):
        config = ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(config.case_id, 1)
        self.assertEqual(config.loads[0].b0, 5e7)
        self.assertEqual(config.loads[0].window, (0.0, 2e-6))
        self.assertEqual(config.border, 'fixed')
        self.assertEqual(config.every_n_steps, 5)
        self.assertIsNone(config.tau)
        self.assertEqual((config.beta1, config.beta2), (0.5, 0.5))

    def test_missing_material_key_is_named(self):
        del self.data['material']['rho']

        with self.assertRaises(ConfigurationError) as context:
            ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(context.exception.key, 'material.rho')
        self.assertIn('material.rho', str(context.exception))

    def test_missing_time_is_named(self):
        del self.data['T']

        with self.assertRaises(ConfigurationError) as context:
            ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(context.exception.key, 'T')

    def test_wrong_type_is_named(self):
        self.data['mesh']['nx'] = '4'

        with self.assertRaises(ConfigurationError) as context:
            ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(context.exception.key, 'mesh.nx')

    def test_invalid_case_id(self):
        self.data['case'] = {'id': 9}

        with self.assertRaises(ConfigurationError):
            ScenarioConfigReader.from_dict(self.data)

    def test_anisotropic_material(self):
        self.data['material'] = {'type': 'anisotropic', 'rho': 1600.0, 'h': 0.002,
                                 'entries': [[1, 1, 150], [1, 2, 40], [1, 3, 10], [2, 2, 150], [2, 3, 80],
                                             [3, 3, 150], [4, 4, 80], [5, 5, 20], [6, 6, 30]]}

        config = ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(config.material.D.d[5, 5], 30e9)

    def test_indefinite_material(self):
        self.data['material'] = {'type': 'anisotropic', 'rho': 1600.0, 'h': 0.002,
                                 'entries': [[1, 1, 1], [1, 2, 5], [2, 2, 1], [3, 3, 1],
                                             [4, 4, 1], [5, 5, 1], [6, 6, 1]]}

        with self.assertRaises(MaterialError):
            ScenarioConfigReader.from_dict(self.data)

    def test_explicit_load_on_region(self):
        self.data['case'] = {'load': {'kind': 'element-uniform', 'direction': [1.0, 0.0, 0.0], 'b0': 1e6,
                                      'target': {'xmin': 0.0, 'xmax': 0.5, 'ymin': 0.0, 'ymax': 0.5}}}

        config = ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(len(config.loads[0].target), 8)
        self.assertAlmostEqual(config.loads[0].window[1], 1e-6, places=18)
        self.assertIsNone(config.case_id)

    def test_explicit_strike_at_center(self):
        self.data['border'] = 'free'
        self.data['case'] = {'strike': {'speed': 3.0, 'angle_to_normal': 0.25}}

        config = ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(config.strikes[0].node, 12)
        self.assertEqual(config.strikes[0].angle_to_normal, 0.25)

    def test_initial_fields(self):
        self.data['initial'] = {'velocity': [0.0, 0.0, 0.5]}

        config = ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(config.initial_velocity, (0.0, 0.0, 0.5))
        self.assertEqual(config.initial_displacement, (0.0, 0.0, 0.0))

    def test_reads_file_with_relative_paths(self):
        msh = '\n'.join(['$MeshFormat', '2.2 0 8', '$EndMeshFormat', '$Nodes', '4',
                         '1 0 0 0', '2 1 0 0', '3 1 1 0', '4 0 1 0', '$EndNodes',
                         '$Elements', '2', '1 2 2 0 1 1 2 3', '2 2 2 0 1 1 3 4', '$EndElements']) + '\n'
        self.data['mesh'] = {'msh_path': 'square.msh'}
        self.data['case'] = {'strike': {'node': 2, 'speed': 1.0}}
        self.data['border'] = 'free'

        with tempfile.TemporaryDirectory() as tmp_dir:
            tmp_dir = pathlib.Path(tmp_dir)
            (tmp_dir / 'square.msh').write_text(msh)
            (tmp_dir / 'config.json').write_text(json.dumps(self.data))

            config = ScenarioConfigReader.read_file(tmp_dir / 'config.json')

            self.assertEqual(config.mesh.num_triangles, 2)
            self.assertEqual(pathlib.Path(config.directory), tmp_dir / 'out')

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp_dir:
            path = pathlib.Path(tmp_dir) / 'bad.json'
            path.write_text('{"mesh": ')

            with self.assertRaises(ConfigurationError):
                ScenarioConfigReader.read_file(path)

    def test_vector_length_is_checked(self):
        self.data['initial'] = {'velocity': [0.0, 1.0]}

        with self.assertRaises(ConfigurationError) as context:
            ScenarioConfigReader.from_dict(self.data)

        self.assertEqual(context.exception.key, 'initial.velocity')


if __name__ == '__main__':
    main()
