from assemblyClasses.assembler import Assembler
from assemblyClasses.global_system import Constraint
from assemblyClasses.load_model import ElementLoad
from collections import namedtuple
from integratorClasses.newmark import NewmarkIntegrator, NewmarkParams, State
from meshClasses.mesh import Mesh
from scenarioClasses.scenario import ScenarioConfig, membrane_center
from tqdm import tqdm
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

# vmag: (N,) per-node velocity magnitude |(u', v', w')|
Snapshot = namedtuple('Snapshot', 't step state vmag')


def velocity_magnitude(adot) -> np.ndarray:
    return np.linalg.norm(np.asarray(adot).reshape(-1, 3), axis=1)


def mirror_asymmetry(mesh:Mesh, nodal_values) -> float:
    """
    max |value(i) - value(mirror(i))| over the reflection about the split diagonal.
    """
    nodal_values = np.asarray(nodal_values)
    return float(np.max(np.abs(nodal_values - nodal_values[mesh.mirror_node_map()])))


def anisotropy_indicator(mesh:Mesh, nodal_values, distance:float = None) -> float:
    """
    Relative difference between the mean value at the two points on the x axis and the two
    points on the y axis, all at `distance` from the membrane center (default a quarter of
    the smaller side). Zero for a four-fold symmetric field.
    """
    nodal_values = np.asarray(nodal_values)
    cx, cy = membrane_center(mesh)
    if distance is None:
        distance = 0.25 * float(np.ptp(mesh.coords, axis=0).min())

    along_x = [mesh.nearest_node((cx - distance, cy)), mesh.nearest_node((cx + distance, cy))]
    along_y = [mesh.nearest_node((cx, cy - distance)), mesh.nearest_node((cx, cy + distance))]
    x_value = nodal_values[along_x].mean()
    y_value = nodal_values[along_y].mean()
    largest = max(abs(x_value), abs(y_value))
    return 0.0 if largest == 0 else float(abs(x_value - y_value) / largest)


class ScenarioRunner():
    """
    Assembles and integrates one scenario from t = 0 to T.

    The time step is the configured tau (or the CFL default) shrunk to T / ceil(T / tau),
    so the last step lands on T exactly.
    """

    STEP_COUNT_TOLERANCE = 1e-9

    def __init__(self, config:ScenarioConfig):
        if not isinstance(config, ScenarioConfig):
            raise TypeError("config should be a ScenarioConfig!")
        self._config = config
        self._assembler = Assembler(config.mesh, config.material)

        element_loads = [ElementLoad(load.element_b(config.mesh), *load.window) for load in config.loads]
        system = self._assembler.assemble(element_loads).with_constraints(self._constraints())

        requested_tau = config.tau
        if requested_tau is None:
            requested_tau = NewmarkParams.default_tau(config.mesh, config.material)
        self._num_steps = self.step_count(config.T, requested_tau)
        tau = config.T / self._num_steps
        if tau != requested_tau:
            logger.info(f"tau adjusted from {requested_tau:.6e} to {tau:.6e} s for {self._num_steps} steps")

        self._integrator = NewmarkIntegrator(system, NewmarkParams(tau, config.beta1, config.beta2))
        self._final_state = None

    @classmethod
    def step_count(cls, T:float, tau:float) -> int:
        return max(1, math.ceil(T / tau - cls.STEP_COUNT_TOLERANCE))

    @property
    def config(self):
        return self._config

    @property
    def mesh(self):
        return self._config.mesh

    @property
    def assembler(self):
        return self._assembler

    @property
    def integrator(self):
        return self._integrator

    @property
    def system(self):
        return self._integrator.system

    @property
    def tau(self):
        return self._integrator.params.tau

    @property
    def num_steps(self):
        return self._num_steps

    @property
    def final_state(self):
        """
        Last state of the latest run, None before run
        """
        return self._final_state

    def _constraints(self) -> list:
        constraints = list()
        if self._config.border == 'fixed':
            constraints.extend(Constraint(node, np.zeros(3)) for node in sorted(self._config.mesh.boundary_nodes()))
        constraints.extend(Constraint(strike.node, strike.velocity) for strike in self._config.strikes)
        return constraints

    def initial_state(self) -> State:
        num_nodes = self._config.mesh.num_nodes
        a0 = np.tile(self._config.initial_displacement, num_nodes)
        v0 = np.tile(self._config.initial_velocity, num_nodes)
        return self._integrator.init_state(a0, v0)

    def is_snapshot_step(self, step:int) -> bool:
        return step % self._config.every_n_steps == 0 or step == self._num_steps

    def run(self, on_snapshot=None, keep_snapshots:bool = True, progress:bool = False) -> list:
        """
        Integrates to T. Snapshots are taken at step 0, every `every_n_steps` steps and at T;
        each goes to on_snapshot(snapshot) when given and is returned when keep_snapshots is set.
        """
        snapshots = list()

        def emit(state:State):
            snapshot = Snapshot(state.t, state.step, state, velocity_magnitude(state.adot))
            if on_snapshot is not None:
                on_snapshot(snapshot)
            if keep_snapshots:
                snapshots.append(snapshot)

        logger.info(f"Running '{self._config.name}': {self._num_steps} steps of {self.tau:.6e} s "
                    f"on {self._config.mesh.num_nodes} nodes")
        self._integrator.factor_once()
        state = self.initial_state()
        emit(state)

        for _ in tqdm(range(self._num_steps), desc=self._config.name, unit='step', disable=not progress):
            state = self._integrator.step(state)
            if self.is_snapshot_step(state.step):
                emit(state)

        self._final_state = state
        logger.info(f"Finished '{self._config.name}' at t = {state.t:.6e} s, {len(snapshots)} snapshots kept")
        return snapshots
