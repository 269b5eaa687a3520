from errorClasses.errors import MaterialError
import numpy as np

# Voigt order used everywhere: xx, yy, zz, xy, yz, xz
VOIGT_LABELS = ('xx', 'yy', 'zz', 'xy', 'yz', 'xz')
GPA = 1e9


class ElasticMatrix():
    """
    6x6 stiffness matrix D with sigma = D eps, in the (xx, yy, zz, xy, yz, xz) order.
    Some texts call D the compliance matrix; it is used here as a stiffness.
    """

    PD_TOLERANCE = 1e-9
    NUM_INDEPENDENT_MODULI = 21

    def __init__(self, d):
        d = np.array(d, dtype=float)
        if d.shape != (6, 6):
            raise MaterialError(f"elasticity matrix should be 6x6, got {d.shape}")
        if not np.all(np.isfinite(d)):
            raise MaterialError("elasticity matrix entries should be finite")
        if not np.array_equal(d, d.T):
            raise MaterialError("elasticity matrix should be symmetric")

        eigenvalues = np.linalg.eigvalsh(d)
        smallest, largest = eigenvalues[0], eigenvalues[-1]
        if largest <= 0 or smallest <= ElasticMatrix.PD_TOLERANCE * largest:
            raise MaterialError(f"elasticity matrix is not positive definite: eigenvalue {smallest:.6e} "
                                f"(largest {largest:.6e})", eigenvalue=float(smallest))

        d.setflags(write=False)
        self._d = d

    @property
    def d(self):
        """
        Read-only 6x6 array (Pa)
        """
        return self._d

    @d.setter
    def d(self, new_d):
        raise AttributeError("d is not writable")

    def scaled(self, factor:float):
        return ElasticMatrix(self._d * factor)

    def max_diagonal(self) -> float:
        return float(np.diag(self._d).max())

    def decouples_out_of_plane(self) -> bool:
        """
        True when in-plane (xx, yy, xy) and out-of-plane (yz, xz) strains do not couple.
        """
        in_plane = [0, 1, 2, 3]
        out_of_plane = [4, 5]
        return not np.any(self._d[np.ix_(in_plane, out_of_plane)])

    def __eq__(self, other):
        if not isinstance(other, ElasticMatrix):
            return NotImplemented
        return np.array_equal(self._d, other.d)

    def __repr__(self):
        return f"ElasticMatrix({np.array2string(self._d, precision=4)})"

    @classmethod
    def isotropic(cls, E:float, nu:float):
        if not np.isfinite(E) or E <= 0:
            raise MaterialError(f"Young's modulus should be positive, got {E}", key='material.E')
        if not np.isfinite(nu) or not -1.0 < nu < 0.5:
            raise MaterialError(f"Poisson's ratio should lie in (-1, 0.5), got {nu}", key='material.nu')

        factor = E / ((1 + nu) * (1 - 2 * nu))
        d = np.zeros((6, 6))
        d[:3, :3] = factor * np.array([[1 - nu, nu, nu],
                                       [nu, 1 - nu, nu],
                                       [nu, nu, 1 - nu]])
        d[3:, 3:] = factor * np.eye(3) * (1 - 2 * nu) / 2
        return cls(d)

    @classmethod
    def anisotropic(cls, upper):
        """
        upper: the 21 moduli of the upper triangle, row-major (c11..c16, c22..c26, ..., c66), in Pa.
        """
        upper = np.asarray(upper, dtype=float).ravel()
        if upper.size != ElasticMatrix.NUM_INDEPENDENT_MODULI:
            raise MaterialError(f"expected {ElasticMatrix.NUM_INDEPENDENT_MODULI} moduli, got {upper.size}",
                                key='material.upper')

        d = np.zeros((6, 6))
        d[np.triu_indices(6)] = upper
        d = np.triu(d) + np.triu(d, 1).T
        return cls(d)

    @classmethod
    def from_entries(cls, entries, unit:float = GPA):
        """
        entries: iterable of (i, j, value) with 1-based Voigt indices; unlisted entries are zero.
        """
        d = np.zeros((6, 6))
        for entry in entries:
            try:
                i, j, value = entry
            except (TypeError, ValueError):
                raise MaterialError(f"entry {entry!r} should be [i, j, value]", key='material.entries')
            if not (isinstance(i, int) and isinstance(j, int)) or not (1 <= i <= 6 and 1 <= j <= 6):
                raise MaterialError(f"entry indices should be integers in 1..6, got ({i}, {j})",
                                    key='material.entries')
            row, col = sorted((i - 1, j - 1))
            if d[row, col] != 0:
                raise MaterialError(f"entry c{row + 1}{col + 1} given twice", key='material.entries')
            d[row, col] = float(value) * unit

        return cls.anisotropic(d[np.triu_indices(6)])


class MaterialParams():
    """
    Element-constant material: density, thickness, elasticity and optional failure thresholds.
    """

    def __init__(self, rho:float, h:float, D:ElasticMatrix, strain_threshold:float = None, stress_threshold:float = None):
        self.rho = rho
        self.h = h
        self.D = D
        self.strain_threshold = strain_threshold
        self.stress_threshold = stress_threshold

    @property
    def rho(self):
        """
        Density (kg/m^3)
        """
        return self._rho

    @rho.setter
    def rho(self, new_rho:float):
        self._rho = self._positive(new_rho, 'material.rho')

    @property
    def h(self):
        """
        Thickness (m)
        """
        return self._h

    @h.setter
    def h(self, new_h:float):
        self._h = self._positive(new_h, 'material.h')

    @property
    def D(self):
        return self._D

    @D.setter
    def D(self, new_D:ElasticMatrix):
        if not isinstance(new_D, ElasticMatrix):
            raise TypeError("D should be an ElasticMatrix!")
        self._D = new_D

    @property
    def strain_threshold(self):
        return self._strain_threshold

    @strain_threshold.setter
    def strain_threshold(self, new_threshold:float):
        self._strain_threshold = None if new_threshold is None else self._positive(new_threshold, 'material.strain_threshold')

    @property
    def stress_threshold(self):
        return self._stress_threshold

    @stress_threshold.setter
    def stress_threshold(self, new_threshold:float):
        self._stress_threshold = None if new_threshold is None else self._positive(new_threshold, 'material.stress_threshold')

    def max_wave_speed(self) -> float:
        """
        sqrt(max diag(D) / rho), an upper estimate of the fastest wave speed.
        """
        return float(np.sqrt(self._D.max_diagonal() / self._rho))

    def _positive(self, value, key:str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
            raise TypeError(f"{key} should be a number!")
        if not np.isfinite(value) or value <= 0:
            raise MaterialError(f"{key} should be positive, got {value}", key=key)
        return float(value)
