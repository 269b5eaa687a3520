from collections import namedtuple
from errorClasses.errors import ConfigurationError
from integratorClasses.newmark import NewmarkParams
from meshClasses.mesh import Mesh, StructuredSpec
from multiprocessing import Pool
from scenarioClasses.scenario import CaseParams, build_case, central_region
from scenarioClasses.scenario_runner import ScenarioRunner
from timeit import default_timer as timer
import numpy as np
import logging

logger = logging.getLogger(__name__)

NORMS = ('L1', 'L2', 'Linf')
LOAD_REGIONS = ('per-level', 'baseline')
LOOKUP_TOLERANCE = 1e-12

# Solution of one refinement level restricted to the baseline nodes
LevelSolution = namedtuple('LevelSolution', 'level n_nodes tau num_steps displacement velocity wall_time')
# Row k compares level k + 1 against level k; n_nodes and tau are those of level k + 1
DifferenceRow = namedtuple('DifferenceRow', 'level n_nodes tau norms displacement_norms velocity_norms')
StudyResult = namedtuple('StudyResult', 'spec levels rows rates displacement_rates velocity_rates')


class StudySpec(namedtuple('StudySpec', 'case_id params base k_max norms load_region')):
    """
    Refinement study of a numbered case: level k runs on base refined k times with tau_0 / 2^k.
    """
    __slots__ = ()

    def __new__(cls, case_id, params:CaseParams, base:StructuredSpec, k_max:int = 4, norms=NORMS,
                load_region:str = 'per-level'):
        if case_id not in (None, 1, 2, 3, 4, 5):
            raise ConfigurationError(f"case id should be in 1..5, got {case_id!r}", key='scenario.case.id')
        if not isinstance(base, StructuredSpec):
            raise ConfigurationError("convergence studies need a structured base mesh", key='scenario.mesh')
        if isinstance(k_max, bool) or not isinstance(k_max, int) or k_max < 2:
            raise ConfigurationError(f"need >= 2 levels of refinement for a rate, got k_max = {k_max!r}", key='k_max')
        norms = tuple(norms)
        if len(norms) == 0 or any(which not in NORMS for which in norms):
            raise ConfigurationError(f"norms should be a non empty subset of {NORMS}, got {list(norms)}", key='norms')
        if load_region not in LOAD_REGIONS:
            raise ConfigurationError(f"load_region should be one of {LOAD_REGIONS}, got {load_region!r}",
                                     key='scenario.case.load_region')
        return super().__new__(cls, case_id, params, base, k_max, norms, load_region)

    @property
    def T(self):
        return self.params.T


def norm(d, which:str) -> float:
    """
    Averaged discrete norms: L1 = mean |d|, L2 = sqrt(mean d^2), Linf = max |d|.
    """
    d = np.asarray(d, dtype=float).ravel()
    if d.size == 0:
        raise ValueError("norm of an empty vector")
    if which == 'L1':
        return float(np.mean(np.abs(d)))
    if which == 'L2':
        return float(np.sqrt(np.mean(d ** 2)))
    if which == 'Linf':
        return float(np.max(np.abs(d)))
    raise ValueError(f"unknown norm {which!r}, expected one of {NORMS}")


def fit_rate(values):
    """
    -slope of the least squares line through (k, log2 values[k]). Zero values are left out;
    None when fewer than two values remain.
    """
    values = np.asarray(values, dtype=float)
    levels = np.arange(values.size)
    usable = values > 0
    if not np.all(usable):
        logger.warning(f"Excluding zero norms at levels {levels[~usable].tolist()} from the rate fit")
    if usable.sum() < 2:
        logger.warning("Fewer than two non zero norms, no rate fitted")
        return None
    slope = np.polyfit(levels[usable], np.log2(values[usable]), 1)[0]
    return float(-slope)


def _solve_level(spec:StudySpec, level:int, tau:float, region) -> LevelSolution:
    start = timer()
    grid = spec.base.refine(level)
    mesh = Mesh.generate_structured(grid)
    params = spec.params._replace(tau=tau, load_region=region, every_n_steps=2 ** 62, directory=None,
                                  name=f"{spec.params.name}-level{level}")
    runner = ScenarioRunner(build_case(spec.case_id, params, mesh))
    runner.run(keep_snapshots=False)

    base_coords = Mesh.generate_structured(spec.base).coords
    nodes = mesh.locate_nodes(base_coords, LOOKUP_TOLERANCE * grid.spacing)
    dofs = runner.system.dof_map.dofs_of_nodes(nodes)
    state = runner.final_state

    logger.info(f"Level {level}: {mesh.num_nodes} nodes, {runner.num_steps} steps of {runner.tau:.6e} s")
    return LevelSolution(level, mesh.num_nodes, runner.tau, runner.num_steps,
                         state.a[dofs].copy(), state.adot[dofs].copy(), timer() - start)


class ConvergenceStudy():
    """
    Solves every level, restricts each to the base grid nodes, and fits rates to the norms
    of consecutive-level differences of the stacked (displacement, velocity) vector.
    """

    def __init__(self, spec:StudySpec, workers:int = 1):
        if not isinstance(spec, StudySpec):
            raise TypeError("spec should be a StudySpec!")
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise ValueError("workers should be a positive int")
        self._spec = spec
        self._workers = workers

    @property
    def spec(self):
        return self._spec

    @property
    def workers(self):
        return self._workers

    def base_tau(self) -> float:
        """
        tau_0 shrunk so that T is a whole number of steps; level k uses tau_0 / 2^k.
        """
        spec = self._spec
        tau = spec.params.tau
        if tau is None:
            tau = NewmarkParams.default_tau(Mesh.generate_structured(spec.base), spec.params.material)
        return spec.T / ScenarioRunner.step_count(spec.T, tau)

    def load_region(self):
        if self._spec.load_region == 'baseline' and self._spec.case_id in (1, 2):
            return central_region(Mesh.generate_structured(self._spec.base))
        return None

    def solve_levels(self) -> list:
        spec = self._spec
        base_steps = ScenarioRunner.step_count(spec.T, self.base_tau())
        region = self.load_region()
        tasks = [(spec, level, spec.T / (base_steps * 2 ** level), region) for level in range(spec.k_max + 1)]

        workers = min(self._workers, len(tasks))
        logger.info(f"Solving {len(tasks)} levels with {workers} worker(s)")
        if workers == 1:
            return [_solve_level(*task) for task in tasks]
        with Pool(workers) as pool:
            return pool.starmap(_solve_level, tasks)

    def run(self) -> StudyResult:
        levels = self.solve_levels()
        norms = self._spec.norms

        rows = list()
        for coarse, fine in zip(levels[:-1], levels[1:]):
            d_displacement = fine.displacement - coarse.displacement
            d_velocity = fine.velocity - coarse.velocity
            d = np.concatenate((d_displacement, d_velocity))
            rows.append(DifferenceRow(coarse.level, fine.n_nodes, fine.tau,
                                      {which: norm(d, which) for which in norms},
                                      {which: norm(d_displacement, which) for which in norms},
                                      {which: norm(d_velocity, which) for which in norms}))

        rates = {which: fit_rate([row.norms[which] for row in rows]) for which in norms}
        displacement_rates = {which: fit_rate([row.displacement_norms[which] for row in rows]) for which in norms}
        velocity_rates = {which: fit_rate([row.velocity_norms[which] for row in rows]) for which in norms}
        logger.info(f"Fitted rates: {rates}")
        return StudyResult(self._spec, levels, rows, rates, displacement_rates, velocity_rates)


def run_study(spec:StudySpec, workers:int = 1) -> StudyResult:
    return ConvergenceStudy(spec, workers).run()
