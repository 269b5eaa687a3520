from timeit import default_timer as timer
from convergenceClasses.convergence_study import run_study
from convergenceClasses.study_config import StudyConfigReader
from errorClasses.errors import ConfigurationError, MembraneError, NumericalError
from integratorClasses.newmark import NewmarkParams
from meshClasses.msh_reader import MshReader
from outputClasses.run_manifest import RunManifest
from outputClasses.snapshot_writer import SnapshotWriter
from outputClasses.study_report import StudyReportWriter
from pathlib import Path
from scenarioClasses.scenario_config import ScenarioConfigReader
from scenarioClasses.scenario_runner import ScenarioRunner

import logging
import argparse
import resource
import json
import sys
import os


MEGABYTE = 1024 * 1024
THREADS_VARIABLE = 'MEMBRANE_THREADS'
EXIT_OK, EXIT_MEMORY, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def memory_limit(value):
    limit = value * MEGABYTE
    resource.setrlimit(resource.RLIMIT_AS, (limit, limit))


def worker_count() -> int:
    """
    Study worker processes: MEMBRANE_THREADS when set, else 1.
    """
    value = os.environ.get(THREADS_VARIABLE)
    if value is None or value.strip() == '':
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ConfigurationError(f"{THREADS_VARIABLE} should be a positive int, got {value!r}", key=THREADS_VARIABLE)
    if workers < 1:
        raise ConfigurationError(f"{THREADS_VARIABLE} should be a positive int, got {value!r}", key=THREADS_VARIABLE)
    return workers


def cmd_run(my_args) -> int:
    config = ScenarioConfigReader.read_file(my_args.config_path)
    if my_args.out is not None:
        config.directory = Path(my_args.out)
    if my_args.every is not None:
        if my_args.every < 1:
            raise ConfigurationError("--every should be a positive int", key='output.every_n_steps')
        config.every_n_steps = my_args.every
    if my_args.tau is not None:
        if my_args.tau <= 0:
            raise ConfigurationError("--tau should be positive", key='tau')
        config.tau = my_args.tau
    directory = Path(config.directory) if config.directory is not None else Path('out') / config.name

    start = timer()
    runner = ScenarioRunner(config)
    writer = SnapshotWriter(directory, runner.assembler)
    manifest = RunManifest(config.echo(), runner.tau, runner.num_steps)

    def on_snapshot(snapshot):
        written = writer.write(snapshot)
        manifest.record_snapshot(written.strain_flagged, written.stress_flagged)

    runner.run(on_snapshot=on_snapshot, keep_snapshots=False, progress=not my_args.quiet)
    end = timer()

    manifest.finish(end - start)
    manifest.write(directory)
    if not my_args.quiet:
        print(manifest.to_json())
    return EXIT_OK


def cmd_convergence(my_args) -> int:
    spec, directory = StudyConfigReader.read_file(my_args.study_path)
    if my_args.out is not None:
        directory = Path(my_args.out)
    if directory is None:
        directory = Path('out') / f"{spec.params.name}-study"

    start = timer()
    result = run_study(spec, worker_count())
    paths = StudyReportWriter(directory).write(result)
    end = timer()

    run_info = dict()
    run_info['Elapsed Time'] = end - start
    run_info['Levels'] = [{'level': level.level, 'n_nodes': level.n_nodes, 'tau': level.tau,
                           'num_steps': level.num_steps} for level in result.levels]
    run_info['Rates'] = result.rates
    run_info['Displacement Rates'] = result.displacement_rates
    run_info['Velocity Rates'] = result.velocity_rates
    run_info['Files'] = {name: str(path) for name, path in paths.items()}
    if not my_args.quiet:
        print(json.dumps(run_info, indent=4))
    return EXIT_OK


def cmd_mesh_info(my_args) -> int:
    mesh = MshReader.read_file(my_args.msh_path)

    run_info = dict()
    run_info['Nodes'] = mesh.num_nodes
    run_info['Triangles'] = mesh.num_triangles
    run_info['Total Area'] = mesh.total_area()
    run_info['Boundary Nodes'] = len(mesh.boundary_nodes())
    run_info['Min Edge'] = mesh.min_edge_length()
    run_info['Max Extent'] = mesh.max_extent()
    if my_args.material_path is not None:
        material = ScenarioConfigReader.read_material(ScenarioConfigReader.load_json(my_args.material_path))
        run_info['Default Tau'] = NewmarkParams.default_tau(mesh, material)
    print(json.dumps(run_info, indent=4))
    return EXIT_OK


def main(my_args) -> int:
    commands = {'run': cmd_run, 'convergence': cmd_convergence, 'mesh-info': cmd_mesh_info}
    try:
        return commands[my_args.command](my_args)
    except MemoryError:
        sys.stderr.write('\n\nERROR: Memory Exception\n')
        return EXIT_MEMORY
    except NumericalError as error:
        logging.exception("Numerical failure")
        sys.stderr.write(f"ERROR: numerical failure: {error}\n")
        return EXIT_NUMERICAL
    except (MembraneError, ValueError, TypeError, OSError) as error:
        logging.exception("Invalid input")
        sys.stderr.write(f"ERROR: {error}\n")
        return EXIT_CONFIG


def configArgs(parser):
    parser.add_argument(
        '-m',
        '--memory-limit',
        dest='memory_limit',
        action='store',
        type=int,
        default=None,
        help='memory available in MB'
    )

    parser.add_argument(
        '--log',
        dest='log_path',
        action='store',
        default='log.log',
        help='path of the log file'
    )

    parser.add_argument(
        '-q',
        '--quiet',
        dest='quiet',
        action='store_true',
        help='no progress bar and no summary on stdout'
    )

    subparsers = parser.add_subparsers(dest='command', required=True)

    run_parser = subparsers.add_parser('run', help='run one scenario and write snapshots')
    run_parser.add_argument('config_path', help='path to a scenario config (JSON)')
    run_parser.add_argument('--out', dest='out', default=None, help='output directory')
    run_parser.add_argument('--every', dest='every', type=int, default=None, help='snapshot every N steps')
    run_parser.add_argument('--tau', dest='tau', type=float, default=None, help='time step in s')

    study_parser = subparsers.add_parser('convergence', help='run a refinement study and write its report')
    study_parser.add_argument('study_path', help='path to a study config (JSON)')
    study_parser.add_argument('--out', dest='out', default=None, help='output directory')

    mesh_parser = subparsers.add_parser('mesh-info', help='summarize a Gmsh 2.x ASCII mesh')
    mesh_parser.add_argument('msh_path', help='path to a .msh file')
    mesh_parser.add_argument('--material', dest='material_path', default=None,
                             help='config with a material block, to report the default time step')
    return parser


def run_cli(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Thin anisotropic membrane dynamics.')
    parser = configArgs(parser)
    my_args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format='%(process)d-%(processName)s-%(levelname)s-%(message)s',
    filename=my_args.log_path, filemode="w")

    if my_args.memory_limit is not None:
        memory_limit(my_args.memory_limit)
    return main(my_args)


if __name__ == "__main__":
    sys.exit(run_cli())
