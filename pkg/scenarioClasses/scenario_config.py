from errorClasses.errors import ConfigurationError
from materialClasses.material import ElasticMatrix, MaterialParams
from meshClasses.mesh import Mesh, StructuredSpec
from meshClasses.msh_reader import MshReader
from pathlib import Path
from scenarioClasses.scenario import (CaseParams, LoadSpec, Region, ScenarioConfig, StrikeSpec, build_case,
                                      elements_in_region, membrane_center, membrane_size)
import json
import logging

logger = logging.getLogger(__name__)

_MISSING = object()


class ScenarioConfigReader():
    """
    Reads scenario JSON files:

        mesh      {Lx, Ly, nx, ny} or {msh_path}
        material  {type: isotropic, E, nu | type: anisotropic, entries | upper; rho, h, thresholds}
        case      {id, params {b0, speed, window, support_radius}} or {load {...}} or {strike {...}}
        border, T, tau, newmark {beta1, beta2}, initial {displacement, velocity},
        output    {every_n_steps, directory}

    msh_path and output.directory are relative to the config file.
    """

    @classmethod
    def load_json(cls, path) -> dict:
        path = Path(path)
        try:
            with open(path, 'r') as config_file:
                data = json.load(config_file)
        except json.JSONDecodeError as error:
            raise ConfigurationError(f"{path}: invalid JSON ({error})")
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: top level should be a JSON object")
        return data

    @classmethod
    def read_file(cls, path) -> ScenarioConfig:
        path = Path(path)
        return cls.from_dict(cls.load_json(path), base_dir=path.parent)

    @classmethod
    def get(cls, data:dict, key:str, prefix:str = '', default=_MISSING):
        """
        data[key], raising ConfigurationError with the dotted key when it is required and missing.
        """
        dotted = f"{prefix}.{key}" if prefix else key
        if not isinstance(data, dict):
            raise ConfigurationError(f"{prefix or 'config'} should be a JSON object", key=prefix or None)
        if key not in data or data[key] is None:
            if default is _MISSING:
                raise ConfigurationError(f"missing required key '{dotted}'", key=dotted)
            return default
        return data[key]

    @classmethod
    def number(cls, data:dict, key:str, prefix:str = '', default=_MISSING) -> float:
        value = cls.get(data, key, prefix, default)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            dotted = f"{prefix}.{key}" if prefix else key
            raise ConfigurationError(f"'{dotted}' should be a number, got {value!r}", key=dotted)
        return float(value)

    @classmethod
    def read_mesh(cls, data:dict, base_dir=None) -> Mesh:
        mesh_data = cls.get(data, 'mesh')
        if isinstance(mesh_data, dict) and 'msh_path' in mesh_data:
            msh_path = Path(mesh_data['msh_path'])
            if base_dir is not None and not msh_path.is_absolute():
                msh_path = Path(base_dir) / msh_path
            return MshReader.read_file(msh_path)
        return Mesh.generate_structured(cls.read_structured_spec(mesh_data))

    @classmethod
    def read_structured_spec(cls, mesh_data:dict) -> StructuredSpec:
        values = dict()
        for key in ('nx', 'ny'):
            count = cls.get(mesh_data, key, 'mesh')
            if isinstance(count, bool) or not isinstance(count, int):
                raise ConfigurationError(f"'mesh.{key}' should be an int, got {count!r}", key=f"mesh.{key}")
            values[key] = count
        for key in ('Lx', 'Ly'):
            values[key] = cls.number(mesh_data, key, 'mesh')

        try:
            return StructuredSpec(values['Lx'], values['Ly'], values['nx'], values['ny'])
        except ValueError as error:
            raise ConfigurationError(f"invalid structured mesh: {error}", key='mesh')

    @classmethod
    def read_material(cls, data:dict) -> MaterialParams:
        material = cls.get(data, 'material')
        kind = cls.get(material, 'type', 'material', 'isotropic')

        if kind == 'isotropic':
            D = ElasticMatrix.isotropic(cls.number(material, 'E', 'material'), cls.number(material, 'nu', 'material'))
        elif kind == 'anisotropic':
            if 'entries' in material:
                D = ElasticMatrix.from_entries(cls.get(material, 'entries', 'material'))
            else:
                D = ElasticMatrix.anisotropic(cls.get(material, 'upper', 'material'))
        else:
            raise ConfigurationError(f"material.type should be 'isotropic' or 'anisotropic', got {kind!r}",
                                     key='material.type')

        return MaterialParams(cls.number(material, 'rho', 'material'),
                              cls.number(material, 'h', 'material'),
                              D,
                              strain_threshold=cls.number(material, 'strain_threshold', 'material', None),
                              stress_threshold=cls.number(material, 'stress_threshold', 'material', None))

    @classmethod
    def read_vector(cls, data:dict, key:str, prefix:str, default) -> tuple:
        value = cls.get(data, key, prefix, default)
        if not isinstance(value, (list, tuple)) or len(value) != len(default):
            raise ConfigurationError(f"'{prefix}.{key}' should be a list of {len(default)} numbers", key=f"{prefix}.{key}")
        return tuple(value)

    @classmethod
    def read_case_params(cls, data:dict, material:MaterialParams, base_dir=None, case_data:dict = None) -> CaseParams:
        """
        Everything but the mesh, so numbered cases can be rebuilt on other grids.
        """
        T = cls.number(data, 'T')
        newmark = cls.get(data, 'newmark', default={})
        initial = cls.get(data, 'initial', default={})
        output = cls.get(data, 'output', default={})
        params = cls.get(case_data or {}, 'params', 'case', {})

        every_n_steps = cls.get(output, 'every_n_steps', 'output', 10)
        directory = cls.get(output, 'directory', 'output', None)
        if directory is not None and base_dir is not None and not Path(directory).is_absolute():
            directory = Path(base_dir) / directory

        window = cls.get(params, 'window', 'case.params', None)
        if window is not None:
            window = cls.read_vector(params, 'window', 'case.params', (0.0, 0.0))

        return CaseParams(material=material,
                          T=T,
                          border=cls.get(data, 'border', default='free'),
                          tau=cls.number(data, 'tau', default=None),
                          beta1=cls.number(newmark, 'beta1', 'newmark', 0.5),
                          beta2=cls.number(newmark, 'beta2', 'newmark', 0.5),
                          b0=cls.number(params, 'b0', 'case.params', 1e8),
                          speed=cls.number(params, 'speed', 'case.params', 10.0),
                          window=window,
                          support_radius=cls.number(params, 'support_radius', 'case.params', None),
                          load_region=None,
                          initial_displacement=cls.read_vector(initial, 'displacement', 'initial', (0.0, 0.0, 0.0)),
                          initial_velocity=cls.read_vector(initial, 'velocity', 'initial', (0.0, 0.0, 0.0)),
                          every_n_steps=every_n_steps,
                          directory=directory,
                          name=cls.get(data, 'name', default='scenario'))

    @classmethod
    def read_case_id(cls, case_data:dict):
        case_id = cls.get(case_data, 'id', 'case', None)
        if case_id is not None and (isinstance(case_id, bool) or not isinstance(case_id, int)):
            raise ConfigurationError(f"case.id should be an int in 1..5, got {case_id!r}", key='case.id')
        return case_id

    @classmethod
    def from_dict(cls, data:dict, base_dir=None) -> ScenarioConfig:
        material = cls.read_material(data)
        case_data = cls.get(data, 'case', default={})
        params = cls.read_case_params(data, material, base_dir, case_data)
        mesh = cls.read_mesh(data, base_dir)

        if 'load' in case_data or 'strike' in case_data:
            config = cls._explicit_case(case_data, params, mesh)
        else:
            config = build_case(cls.read_case_id(case_data), params, mesh)

        logger.info(f"Read scenario '{config.name}': case {config.case_id}, {mesh.num_nodes} nodes, "
                    f"{len(config.loads)} loads, {len(config.strikes)} strikes, border {config.border}")
        return config

    @classmethod
    def _explicit_case(cls, case_data:dict, params:CaseParams, mesh:Mesh) -> ScenarioConfig:
        loads = list()
        strikes = list()

        if 'load' in case_data:
            load = case_data['load']
            prefix = 'case.load'
            kind = cls.get(load, 'kind', prefix)
            window = cls.get(load, 'window', prefix, None)
            if window is None:
                window = (0.0, params.T / 10) if kind == 'element-uniform' else (0.0, params.T)
            target = cls.get(load, 'target', prefix, 'central-pair')
            loads.append(LoadSpec(kind,
                                  cls.read_vector(load, 'direction', prefix, (0.0, 0.0, 1.0)),
                                  cls.number(load, 'b0', prefix),
                                  window,
                                  target=cls._resolve_target(target, mesh) if kind == 'element-uniform' else (),
                                  L=cls.number(load, 'L', prefix, membrane_size(mesh)),
                                  support_radius=cls.number(load, 'support_radius', prefix, None)))

        if 'strike' in case_data:
            strike = case_data['strike']
            prefix = 'case.strike'
            node = cls.get(strike, 'node', prefix, 'center')
            if node == 'center':
                node = mesh.nearest_node(membrane_center(mesh))
            elif isinstance(node, bool) or not isinstance(node, int):
                raise ConfigurationError(f"case.strike.node should be 'center' or a node id, got {node!r}",
                                         key='case.strike.node')
            strikes.append(StrikeSpec(node, cls.number(strike, 'speed', prefix),
                                      cls.number(strike, 'angle_to_normal', prefix, 0.0)))

        return ScenarioConfig(mesh, params.material, params.T, loads=loads, strikes=strikes, border=params.border,
                              tau=params.tau, beta1=params.beta1, beta2=params.beta2,
                              initial_displacement=params.initial_displacement,
                              initial_velocity=params.initial_velocity, every_n_steps=params.every_n_steps,
                              directory=params.directory, name=params.name)

    @classmethod
    def _resolve_target(cls, target, mesh:Mesh) -> tuple:
        if target == 'central-pair':
            return mesh.central_element_pair()
        if isinstance(target, dict):
            region = Region(*(cls.number(target, key, 'case.load.target') for key in Region._fields))
            return elements_in_region(mesh, region)
        if isinstance(target, list) and all(isinstance(element, int) and not isinstance(element, bool) for element in target):
            return tuple(target)
        raise ConfigurationError("case.load.target should be 'central-pair', a list of element ids or a region",
                                 key='case.load.target')
