from collections import namedtuple
from errorClasses.errors import ElementError
import numpy as np


class ShapeCoeffs(namedtuple('ShapeCoeffs', 'alpha beta gamma Se')):
    """
    Linear shape functions N_i = alpha_i + beta_i x + gamma_i y of a triangle.
    Se is the signed doubled area. Fields carry a leading element axis when batched.
    """
    __slots__ = ()

    @property
    def area(self):
        return np.abs(self.Se) / 2

    def evaluate(self, x, y):
        """
        Values of the three shape functions at (x, y).
        """
        return self.alpha + self.beta * np.asarray(x)[..., None] + self.gamma * np.asarray(y)[..., None]


class TriangleElement():
    """
    Kernels of the 3-node membrane triangle with (u, v, w) at every vertex.
    Every method accepts a single element or a leading batch axis of elements.
    """

    DEGENERACY_TOLERANCE = 1e-14
    DOFS = 9
    # consistent mass: rho h A / 12 * (2 on the vertex diagonal, 1 off it), per direction
    MASS_PATTERN = np.kron(np.array([[2.0, 1.0, 1.0],
                                     [1.0, 2.0, 1.0],
                                     [1.0, 1.0, 2.0]]), np.eye(3)) / 12

    @classmethod
    def shape_coefficients(cls, coords, triangle_ids=None) -> ShapeCoeffs:
        """
        coords: (..., 3, 2) vertex coordinates (x0, y0).
        triangle_ids: ids reported when a triangle is degenerate (defaults to the batch index).
        """
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-2:] != (3, 2):
            raise ValueError(f"coords should have shape (..., 3, 2), got {coords.shape}")

        x = coords[..., 0]
        y = coords[..., 1]
        xj, yj = np.roll(x, -1, axis=-1), np.roll(y, -1, axis=-1)
        xk, yk = np.roll(x, -2, axis=-1), np.roll(y, -2, axis=-1)

        Se = ((x[..., 1] - x[..., 0]) * (y[..., 2] - y[..., 0])
              - (x[..., 2] - x[..., 0]) * (y[..., 1] - y[..., 0]))

        max_edge_squared = ((xj - x) ** 2 + (yj - y) ** 2).max(axis=-1)
        degenerate = np.abs(Se) <= cls.DEGENERACY_TOLERANCE * max_edge_squared
        if np.any(degenerate):
            first = int(np.flatnonzero(np.atleast_1d(degenerate))[0])
            triangle_id = first if triangle_ids is None else int(np.atleast_1d(triangle_ids)[first])
            raise ElementError("degenerate triangle", triangle_id)

        Se_column = np.asarray(Se)[..., None]
        alpha = (xj * yk - xk * yj) / Se_column
        beta = (yj - yk) / Se_column
        gamma = (xk - xj) / Se_column
        return ShapeCoeffs(alpha, beta, gamma, Se)

    @classmethod
    def strain_displacement(cls, sc:ShapeCoeffs) -> np.ndarray:
        """
        B (..., 6, 9): rows in Voigt order, one 3-column block (u, v, w) per vertex.
        The eps_zz row stays zero.
        """
        beta = np.asarray(sc.beta)
        gamma = np.asarray(sc.gamma)
        B = np.zeros(beta.shape[:-1] + (6, 9))
        for vertex in range(3):
            u, v, w = 3 * vertex, 3 * vertex + 1, 3 * vertex + 2
            B[..., 0, u] = beta[..., vertex]
            B[..., 1, v] = gamma[..., vertex]
            B[..., 3, u] = gamma[..., vertex]
            B[..., 3, v] = beta[..., vertex]
            B[..., 4, w] = gamma[..., vertex]
            B[..., 5, w] = beta[..., vertex]
        return B

    @classmethod
    def element_stiffness(cls, B, D, h, area) -> np.ndarray:
        """
        Ke = h * area * B^T D B, exact for the constant-strain triangle.
        """
        B = np.asarray(B, dtype=float)
        D = np.asarray(D, dtype=float)
        scale = np.asarray(np.multiply(h, area), dtype=float)
        Ke = np.einsum('...ki,...kl,...lj->...ij', B, D, B) * scale[..., None, None]
        return 0.5 * (Ke + np.swapaxes(Ke, -1, -2))

    @classmethod
    def element_mass(cls, rho, h, area) -> np.ndarray:
        scale = np.asarray(np.multiply(np.multiply(rho, h), area), dtype=float)
        return scale[..., None, None] * cls.MASS_PATTERN

    @classmethod
    def element_load(cls, b, h, area) -> np.ndarray:
        """
        fe = -(h * area / 3) * (b, b, b) for a force density b uniform over the element.
        """
        b = np.asarray(b, dtype=float)
        scale = np.asarray(np.multiply(h, area) / 3, dtype=float)
        return -scale[..., None] * np.concatenate((b, b, b), axis=-1)

    @classmethod
    def recover_stress_strain(cls, sc:ShapeCoeffs, D, a_e) -> tuple:
        B = cls.strain_displacement(sc)
        strain = np.einsum('...ij,...j->...i', B, np.asarray(a_e, dtype=float))
        stress = np.einsum('...ij,...j->...i', np.asarray(D, dtype=float), strain)
        return strain, stress

    @classmethod
    def threshold_flags(cls, strain, stress, strain_threshold:float = None, stress_threshold:float = None) -> tuple:
        """
        (strain_flag, stress_flag): any Voigt component above its threshold in magnitude.
        """
        strain = np.asarray(strain)
        stress = np.asarray(stress)
        strain_flag = np.zeros(strain.shape[:-1], dtype=bool)
        stress_flag = np.zeros(stress.shape[:-1], dtype=bool)
        if strain_threshold is not None:
            strain_flag = np.any(np.abs(strain) > strain_threshold, axis=-1)
        if stress_threshold is not None:
            stress_flag = np.any(np.abs(stress) > stress_threshold, axis=-1)
        return strain_flag, stress_flag

    @classmethod
    def nodal_forces(cls, Ke, Me, fe, a_e, addot_e) -> np.ndarray:
        """
        Balancing nodal forces q_e = Me a_e'' + Ke a_e + fe of an element.
        They cancel when summed over the mesh for an unconstrained node in equilibrium.
        """
        return (np.einsum('...ij,...j->...i', Me, addot_e)
                + np.einsum('...ij,...j->...i', Ke, a_e)
                + np.asarray(fe, dtype=float))
