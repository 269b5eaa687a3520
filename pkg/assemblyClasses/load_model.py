from collections import namedtuple
import numpy as np

# b: (E, 3) force density per element (N/m^3), constant on [t_start, t_end]
ElementLoad = namedtuple('ElementLoad', 'b t_start t_end')


class LoadModel():
    """
    Global load f(t) as a sum of constant terms, each switched on over a closed time window.
    Loads enter with the sign of M a'' + K a + f = 0, i.e. f = -(assembled N^T b).
    """

    WINDOW_TOLERANCE = 1e-9

    def __init__(self, num_dofs:int):
        self._num_dofs = num_dofs
        self._terms = list()

    @property
    def num_dofs(self):
        return self._num_dofs

    @property
    def num_terms(self):
        return len(self._terms)

    def add(self, f_vector, t_start:float, t_end:float):
        f_vector = np.asarray(f_vector, dtype=float)
        if f_vector.shape != (self._num_dofs,):
            raise ValueError(f"load vector should have shape ({self._num_dofs},), got {f_vector.shape}")
        if t_end < t_start:
            raise ValueError(f"load window [{t_start}, {t_end}] ends before it starts")
        f_vector.setflags(write=False)
        self._terms.append((f_vector, float(t_start), float(t_end)))

    @classmethod
    def is_active(cls, t_start:float, t_end:float, t:float) -> bool:
        slack = LoadModel.WINDOW_TOLERANCE * max(abs(t_start), abs(t_end))
        return t_start - slack <= t <= t_end + slack

    def at(self, t:float) -> np.ndarray:
        f = np.zeros(self._num_dofs)
        for f_vector, t_start, t_end in self._terms:
            if LoadModel.is_active(t_start, t_end, t):
                f += f_vector
        return f
