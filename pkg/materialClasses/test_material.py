from unittest import TestCase, main
from errorClasses.errors import ConfigurationError, MaterialError
from materialClasses.material import GPA, ElasticMatrix, MaterialParams
import numpy as np

LAYERED_ENTRIES = [(1, 1, 150), (1, 2, 40), (1, 3, 10), (2, 2, 150), (2, 3, 80), (3, 3, 150),
                   (4, 4, 80), (5, 5, 20), (6, 6, 30)]


class TestElasticMatrix(TestCase):

    def test_isotropic_entries(self):
        E, nu = 70e9, 0.3
        D = ElasticMatrix.isotropic(E, nu)

        self.assertAlmostEqual(D.d[0, 0] / (E * (1 - nu) / ((1 + nu) * (1 - 2 * nu))), 1.0, places=12)
        self.assertAlmostEqual(D.d[3, 3] / (E / (2 * (1 + nu))), 1.0, places=12)
        self.assertEqual(D.d[0, 3], 0.0)
        self.assertTrue(D.decouples_out_of_plane())

    def test_layered_material_is_positive_definite(self):
        D = ElasticMatrix.from_entries(LAYERED_ENTRIES)

        self.assertTrue(np.all(np.linalg.eigvalsh(D.d) > 0))
        self.assertEqual(D.d[2, 1], 80 * GPA)
        self.assertEqual(D.d[4, 4], 20 * GPA)
        self.assertTrue(D.decouples_out_of_plane())

    def test_anisotropic_from_upper_triangle(self):
        full = ElasticMatrix.from_entries(LAYERED_ENTRIES).d
        upper = full[np.triu_indices(6)]

        self.assertEqual(ElasticMatrix.anisotropic(upper), ElasticMatrix(full))

    def test_rejects_indefinite(self):
        d = np.eye(6)
        d[0, 1] = d[1, 0] = 2.0

        with self.assertRaises(MaterialError) as context:
            ElasticMatrix(d)

        self.assertLess(context.exception.eigenvalue, 0)

    def test_rejects_asymmetric(self):
        d = np.eye(6)
        d[0, 1] = 0.5

        with self.assertRaises(MaterialError):
            ElasticMatrix(d)

    def test_rejects_wrong_shape(self):
        with self.assertRaises(MaterialError):
            ElasticMatrix(np.eye(3))

    def test_rejects_duplicate_entries(self):
        with self.assertRaises(MaterialError):
            ElasticMatrix.from_entries([(1, 1, 100), (1, 1, 100)])
        with self.assertRaises(MaterialError):
            ElasticMatrix.from_entries([(1, 2, 10), (2, 1, 10)] + LAYERED_ENTRIES[3:])

    def test_rejects_bad_isotropic_constants(self):
        with self.assertRaises(MaterialError):
            ElasticMatrix.isotropic(-1.0, 0.3)
        with self.assertRaises(MaterialError):
            ElasticMatrix.isotropic(70e9, 0.5)

    def test_d_is_read_only(self):
        D = ElasticMatrix.isotropic(1.0, 0.25)

        with self.assertRaises(ValueError):
            D.d[0, 0] = 5.0
        with self.assertRaises(AttributeError):
            D.d = np.eye(6)


class TestMaterialParams(TestCase):

    def setUp(self):
        self.D = ElasticMatrix.isotropic(70e9, 0.3)

    def test_holds_values(self):
        material = MaterialParams(2700.0, 1e-3, self.D, strain_threshold=0.01)

        self.assertEqual(material.rho, 2700.0)
        self.assertEqual(material.h, 1e-3)
        self.assertEqual(material.strain_threshold, 0.01)
        self.assertIsNone(material.stress_threshold)

    def test_rejects_non_positive_density(self):
        with self.assertRaises(MaterialError) as context:
            MaterialParams(0.0, 1e-3, self.D)

        self.assertEqual(context.exception.key, 'material.rho')
        self.assertIsInstance(context.exception, ConfigurationError)

    def test_rejects_non_matrix(self):
        with self.assertRaises(TypeError):
            MaterialParams(2700.0, 1e-3, np.eye(6))

    def test_max_wave_speed(self):
        material = MaterialParams(2700.0, 1e-3, self.D)

        self.assertAlmostEqual(material.max_wave_speed(), np.sqrt(self.D.d[0, 0] / 2700.0))


if __name__ == '__main__':
    main()
