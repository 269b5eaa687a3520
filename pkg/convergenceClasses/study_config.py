from convergenceClasses.convergence_study import NORMS, StudySpec
from errorClasses.errors import ConfigurationError
from pathlib import Path
from scenarioClasses.scenario_config import ScenarioConfigReader


class StudyConfigReader():
    """
    Study JSON: {scenario: {...scenario config, structured mesh, case {id, params, load_region}},
                 k_max, norms, output {directory}}
    """

    @classmethod
    def read_file(cls, path) -> tuple:
        path = Path(path)
        return cls.from_dict(ScenarioConfigReader.load_json(path), base_dir=path.parent)

    @classmethod
    def from_dict(cls, data:dict, base_dir=None) -> tuple:
        """
        (StudySpec, output directory or None)
        """
        scenario = ScenarioConfigReader.get(data, 'scenario')
        mesh_data = ScenarioConfigReader.get(scenario, 'mesh', 'scenario')
        if isinstance(mesh_data, dict) and 'msh_path' in mesh_data:
            raise ConfigurationError("convergence studies need a structured mesh {Lx, Ly, nx, ny}", key='scenario.mesh')
        base = ScenarioConfigReader.read_structured_spec(mesh_data)

        material = ScenarioConfigReader.read_material(scenario)
        case_data = ScenarioConfigReader.get(scenario, 'case', 'scenario', {})
        if 'load' in case_data or 'strike' in case_data:
            raise ConfigurationError("convergence studies take a numbered case, not an explicit load or strike",
                                     key='scenario.case')
        case_id = ScenarioConfigReader.read_case_id(case_data)
        params = ScenarioConfigReader.read_case_params(scenario, material, None, case_data)

        output = ScenarioConfigReader.get(data, 'output', default={})
        directory = ScenarioConfigReader.get(output, 'directory', 'output', None)
        if directory is not None and base_dir is not None and not Path(directory).is_absolute():
            directory = Path(base_dir) / directory

        spec = StudySpec(case_id, params, base,
                         k_max=ScenarioConfigReader.get(data, 'k_max', default=4),
                         norms=ScenarioConfigReader.get(data, 'norms', default=list(NORMS)),
                         load_region=ScenarioConfigReader.get(case_data, 'load_region', 'scenario.case', 'per-level'))
        return spec, directory
