from assemblyClasses.dof_map import DofMap
from assemblyClasses.load_model import LoadModel
from collections import namedtuple
from errorClasses.errors import AssemblyError, ConfigurationError
from scipy.sparse import csr_matrix, diags, issparse
import numpy as np
import logging

logger = logging.getLogger(__name__)

# v_fix: prescribed velocity (m/s) of a node; (0, 0, 0) fixes its position
Constraint = namedtuple('Constraint', 'node v_fix')


class GlobalSystem():
    """
    M a'' + K a + f(t) = 0 over 3 * N_nodes DOFs.

    Constraints are stored with the system and take effect through apply_constraints,
    which returns a new system with the constrained block rows replaced. The pre-constraint
    matrices stay available as K_free and M_free.
    """

    def __init__(self, K, M, load_model:LoadModel = None, dof_map:DofMap = None, constraints=(), free_matrices:tuple = None):
        if not issparse(K) or not issparse(M):
            raise AssemblyError("K and M should be scipy sparse matrices")
        if K.shape != M.shape or K.shape[0] != K.shape[1]:
            raise AssemblyError(f"K {K.shape} and M {M.shape} should be square and of equal size")

        num_dofs = K.shape[0]
        if dof_map is None:
            if num_dofs % DofMap.DOFS_PER_NODE != 0:
                raise AssemblyError(f"{num_dofs} DOFs is not a multiple of {DofMap.DOFS_PER_NODE}")
            dof_map = DofMap(num_dofs // DofMap.DOFS_PER_NODE)
        if dof_map.num_dofs != num_dofs:
            raise AssemblyError(f"DofMap has {dof_map.num_dofs} DOFs, matrices have {num_dofs}")

        if load_model is None:
            load_model = LoadModel(num_dofs)
        if load_model.num_dofs != num_dofs:
            raise AssemblyError(f"load model has {load_model.num_dofs} DOFs, matrices have {num_dofs}")

        self._K = csr_matrix(K)
        self._M = csr_matrix(M)
        self._dof_map = dof_map
        self._load_model = load_model
        self._constraints = self._validated_constraints(constraints)
        self._free_matrices = free_matrices

        keep = np.ones(num_dofs)
        keep[self.constrained_dofs] = 0.0
        self._keep = keep

    @property
    def K(self):
        return self._K

    @property
    def M(self):
        return self._M

    @property
    def K_free(self):
        """
        Stiffness before constraint row replacement (symmetric)
        """
        return self._K if self._free_matrices is None else self._free_matrices[0]

    @property
    def M_free(self):
        return self._M if self._free_matrices is None else self._free_matrices[1]

    @property
    def is_constrained(self):
        return self._free_matrices is not None

    @property
    def num_dofs(self):
        return self._K.shape[0]

    @property
    def dof_map(self):
        return self._dof_map

    @property
    def load_model(self):
        return self._load_model

    @property
    def constraints(self):
        return self._constraints

    @property
    def constrained_dofs(self) -> np.ndarray:
        nodes = [constraint.node for constraint in self._constraints]
        return self._dof_map.dofs_of_nodes(nodes) if nodes else np.zeros(0, dtype=np.int64)

    @property
    def f(self):
        return self.load_at(0.0)

    def _validated_constraints(self, constraints) -> tuple:
        seen = set()
        validated = list()
        for constraint in constraints:
            node = int(constraint.node)
            if not 0 <= node < self._dof_map.num_nodes:
                raise ConfigurationError(f"constrained node {node} does not exist", key='constraints')
            if node in seen:
                raise ConfigurationError(f"node {node} is constrained twice", key='constraints')
            v_fix = np.asarray(constraint.v_fix, dtype=float)
            if v_fix.shape != (DofMap.DOFS_PER_NODE,) or not np.all(np.isfinite(v_fix)):
                raise ConfigurationError(f"v_fix of node {node} should be a finite 3-vector", key='constraints')
            seen.add(node)
            validated.append(Constraint(node, v_fix))
        return tuple(validated)

    def with_constraints(self, constraints):
        """
        Same matrices and loads with extra (not yet applied) constraints.
        """
        if self.is_constrained:
            raise ConfigurationError("constraints were already applied to this system")
        return GlobalSystem(self._K, self._M, self._load_model, self._dof_map,
                            tuple(self._constraints) + tuple(constraints))

    def apply_constraints(self):
        """
        For every constrained node i: block row i of K zeroed, block row i of M zeroed except
        M_ii = I, f_i = 0; the system then states a_i'' = 0. Columns are left untouched.
        """
        if self.is_constrained:
            return self

        row_scale = diags(self._keep)
        K = csr_matrix(row_scale @ self._K)
        M = csr_matrix(row_scale @ self._M + diags(1.0 - self._keep))
        K.eliminate_zeros()
        M.eliminate_zeros()

        logger.info(f"Applied {len(self._constraints)} node constraints ({self.constrained_dofs.size} DOFs)")
        return GlobalSystem(K, M, self._load_model, self._dof_map, self._constraints,
                            free_matrices=(self._K, self._M))

    def load_at(self, t:float) -> np.ndarray:
        """
        f(t) from the loads active at t, constrained entries zeroed once constraints are applied.
        """
        f = self._load_model.at(t)
        if self.is_constrained:
            f *= self._keep
        return f

    def constrained_velocity(self) -> np.ndarray:
        """
        Global velocity vector holding v_fix on constrained DOFs and zero elsewhere.
        """
        velocity = np.zeros(self.num_dofs)
        for constraint in self._constraints:
            velocity[self._dof_map.dofs_of(constraint.node)] = constraint.v_fix
        return velocity

    def residual(self, a, addot, t:float) -> np.ndarray:
        """
        M a'' + K a + f(t) with the pre-constraint matrices and loads.
        """
        return self.M_free @ addot + self.K_free @ a + self._load_model.at(t)
