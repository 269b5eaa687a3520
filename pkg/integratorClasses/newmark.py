from assemblyClasses.global_system import GlobalSystem
from collections import namedtuple
from errorClasses.errors import DivergenceError, SingularSystemError, StaleFactorizationError
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu
import numpy as np
import logging

logger = logging.getLogger(__name__)

# a, adot, addot: global vectors (m, m/s, m/s^2); t in s; step counts from 0
State = namedtuple('State', 'a adot addot t step')


class NewmarkParams():
    """
    Newmark parameters (beta1 for velocities, beta2 for displacements) and time step tau.
    """

    CFL_FRACTION = 0.1

    def __init__(self, tau:float, beta1:float = 0.5, beta2:float = 0.5):
        self.tau = tau
        self.beta1 = beta1
        self.beta2 = beta2

    @property
    def tau(self):
        """
        Time step (s)
        """
        return self._tau

    @tau.setter
    def tau(self, new_tau:float):
        if isinstance(new_tau, bool) or not isinstance(new_tau, (int, float, np.floating)):
            raise TypeError("tau should be a number!")
        if not np.isfinite(new_tau) or new_tau <= 0:
            raise ValueError(f"tau should be positive, got {new_tau}")
        self._tau = float(new_tau)

    @property
    def beta1(self):
        return self._beta1

    @beta1.setter
    def beta1(self, new_beta:float):
        self._beta1 = self._checked_beta(new_beta, 'beta1')

    @property
    def beta2(self):
        return self._beta2

    @beta2.setter
    def beta2(self, new_beta:float):
        self._beta2 = self._checked_beta(new_beta, 'beta2')

    @property
    def unconditionally_stable(self):
        return self._beta2 >= self._beta1 >= 0.5

    def _checked_beta(self, beta, name:str) -> float:
        if isinstance(beta, bool) or not isinstance(beta, (int, float, np.floating)):
            raise TypeError(f"{name} should be a number!")
        if not 0 <= beta <= 1:
            raise ValueError(f"{name} should lie in [0, 1], got {beta}")
        return float(beta)

    @classmethod
    def cfl_estimate(cls, mesh, materials) -> float:
        """
        h_min / c_max with c_max = sqrt(max diag(D) / rho) over the materials.
        """
        if not isinstance(materials, (list, tuple)):
            materials = [materials]
        c_max = max(material.max_wave_speed() for material in materials)
        return mesh.min_edge_length() / c_max

    @classmethod
    def default_tau(cls, mesh, materials) -> float:
        return NewmarkParams.CFL_FRACTION * cls.cfl_estimate(mesh, materials)

    def __repr__(self):
        return f"NewmarkParams(tau={self._tau!r}, beta1={self._beta1!r}, beta2={self._beta2!r})"


class NewmarkIntegrator():
    """
    Advances M a'' + K a + f = 0 with the Newmark scheme

        adot_pred = adot_n + tau (1 - beta1) addot_n
        a_pred    = a_n + tau adot_n + tau^2 / 2 (1 - beta2) addot_n
        addot_n+1 = -A^-1 (f_n+1 + K a_pred),   A = M + tau^2 / 2 beta2 K
        adot_n+1  = adot_pred + beta1 tau addot_n+1
        a_n+1     = a_pred + tau^2 / 2 beta2 addot_n+1

    A is constant, so it is factored once and reused until tau, beta2 or the constraints change.
    """

    PIVOT_RATIO_TOLERANCE = 1e-14

    def __init__(self, system:GlobalSystem, params:NewmarkParams):
        if not isinstance(system, GlobalSystem):
            raise TypeError("system should be a GlobalSystem!")
        if not isinstance(params, NewmarkParams):
            raise TypeError("params should be NewmarkParams!")

        self._system = system.apply_constraints()
        self._params = params
        self._lu = None
        self._factored_for = None
        self._t0 = 0.0

    @property
    def system(self):
        """
        The constrained system being integrated
        """
        return self._system

    @property
    def params(self):
        return self._params

    def _signature(self) -> tuple:
        return (self._params.tau, self._params.beta2, id(self._system))

    @classmethod
    def _factor(cls, matrix, what:str):
        try:
            lu = splu(csc_matrix(matrix))
        except RuntimeError as error:
            raise SingularSystemError(f"{what} is singular: {error}", pivot_ratio=0.0)

        pivots = np.abs(lu.U.diagonal())
        pivot_ratio = float(pivots.min() / pivots.max()) if pivots.max() > 0 else 0.0
        if not np.isfinite(pivot_ratio) or pivot_ratio < NewmarkIntegrator.PIVOT_RATIO_TOLERANCE:
            raise SingularSystemError(f"{what} is numerically singular", pivot_ratio=pivot_ratio)

        logger.info(f"Factored {what}: {matrix.shape[0]} DOFs, pivot ratio {pivot_ratio:.3e}")
        return lu

    def factor_once(self):
        """
        Factors A = M + tau^2 / 2 beta2 K and returns the reusable factorization.
        """
        tau, beta2 = self._params.tau, self._params.beta2
        A = self._system.M + (0.5 * tau ** 2 * beta2) * self._system.K
        self._lu = self._factor(A, 'iteration matrix A')
        self._factored_for = self._signature()
        return self._lu

    def solve(self, rhs) -> np.ndarray:
        """
        x with A x = rhs, using the stored factorization.
        """
        if self._lu is None:
            self.factor_once()
        elif self._factored_for != self._signature():
            raise StaleFactorizationError("tau or beta2 changed since A was factored; call factor_once again")
        return self._lu.solve(np.asarray(rhs, dtype=float))

    def init_state(self, a0=None, v0=None, t0:float = 0.0) -> State:
        """
        Initial state with addot_0 from M addot_0 = -K a_0 - f(t0); constrained nodes get v_fix.
        """
        num_dofs = self._system.num_dofs
        a0 = np.zeros(num_dofs) if a0 is None else np.array(a0, dtype=float)
        v0 = np.zeros(num_dofs) if v0 is None else np.array(v0, dtype=float)
        if a0.shape != (num_dofs,) or v0.shape != (num_dofs,):
            raise ValueError(f"initial vectors should have shape ({num_dofs},)")

        constrained = self._system.constrained_dofs
        v0[constrained] = self._system.constrained_velocity()[constrained]

        mass_lu = self._factor(self._system.M, 'constrained mass matrix')
        addot0 = mass_lu.solve(-(self._system.K @ a0) - self._system.load_at(t0))
        addot0[constrained] = 0.0

        self._t0 = float(t0)
        return State(a0, v0, addot0, float(t0), 0)

    def step(self, state:State) -> State:
        tau = self._params.tau
        beta1, beta2 = self._params.beta1, self._params.beta2
        half_tau_squared = 0.5 * tau ** 2

        adot_pred = state.adot + tau * (1 - beta1) * state.addot
        a_pred = state.a + tau * state.adot + half_tau_squared * (1 - beta2) * state.addot

        t_next = self._t0 + (state.step + 1) * tau
        rhs = -(self._system.load_at(t_next) + self._system.K @ a_pred)
        addot = self.solve(rhs)
        addot[self._system.constrained_dofs] = 0.0

        adot = adot_pred + beta1 * tau * addot
        a = a_pred + half_tau_squared * beta2 * addot

        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(adot))):
            raise DivergenceError(f"non finite state at step {state.step + 1} (t = {t_next:.6e} s)")
        return State(a, adot, addot, t_next, state.step + 1)

    def energy(self, state:State) -> tuple:
        """
        (kinetic, strain) energy in J from the pre-constraint symmetric M and K.
        """
        kinetic = 0.5 * float(state.adot @ (self._system.M_free @ state.adot))
        strain = 0.5 * float(state.a @ (self._system.K_free @ state.a))
        return kinetic, strain
