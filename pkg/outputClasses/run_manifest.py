from pathlib import Path
import json
import psutil

CODE_VERSION = '1.0.0'


class RunManifest():
    """
    Run summary written next to the snapshots as manifest.json.
    """

    def __init__(self, config_echo:dict, tau:float, num_steps:int):
        self.run_info = {
            'code_version': CODE_VERSION,
            'config': config_echo,
            'tau': tau,
            'num_steps': num_steps,
            'wall_time': None,
            'snapshots_written': 0,
            'max_strain_flagged_elements': 0,
            'max_stress_flagged_elements': 0,
            'memory_rss_bytes': None,
        }

    def record_snapshot(self, strain_flagged:int, stress_flagged:int):
        self.run_info['snapshots_written'] += 1
        self.run_info['max_strain_flagged_elements'] = max(self.run_info['max_strain_flagged_elements'], strain_flagged)
        self.run_info['max_stress_flagged_elements'] = max(self.run_info['max_stress_flagged_elements'], stress_flagged)

    def finish(self, wall_time:float):
        self.run_info['wall_time'] = wall_time
        self.run_info['memory_rss_bytes'] = psutil.Process().memory_info().rss

    def to_json(self) -> str:
        return json.dumps(self.run_info, indent=4)

    def write(self, directory) -> Path:
        path = Path(directory) / 'manifest.json'
        with open(path, 'w') as manifest_file:
            manifest_file.write(self.to_json() + '\n')
        return path
