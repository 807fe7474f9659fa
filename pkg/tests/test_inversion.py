import sys
import os
import unittest

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import PreconditionError, ProportionalityError, SizeCapError
from src.inversion import global_inversion_demo, local_inversion, torus_partition_function
from src.operator_algebra import transfer_matrix
from src.weight_models import (Rapidity, SlmnParams, VertexWeightFamily, decoupled_vertex_weight,
                               slmn_vertex_weight)


class TestLocalInversion(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.eta = 0.4
        self.omega = slmn_vertex_weight(SlmnParams.unit_at_equal(0, 2, self.eta))
        self.p, self.q = Rapidity.trivial(0.5, 2), Rapidity.trivial(0.3, 2)

    def test_six_vertex_constant(self):
        """Тест C = 𝒩²(sinh²η - sinh²u) при 𝒩 = 1/sinh η"""
        constant, report = local_inversion(self.omega, self.p, self.q)
        expected = 1 - np.sinh(0.2) ** 2 / np.sinh(self.eta) ** 2
        self.assertTrue(report.passed)
        self.assertAlmostEqual(constant, expected, places=12)
        self.assertEqual(report.scalar_R, constant)

    def test_symmetry(self):
        """Тест C(p,q) = C(q,p)"""
        c_pq, _ = local_inversion(self.omega, self.p, self.q)
        c_qp, _ = local_inversion(self.omega, self.q, self.p)
        self.assertAlmostEqual(c_pq, c_qp, places=12)

    def test_random_pairs(self):
        """Тест инверсии и симметрии C на 20 случайных парах"""
        rng = np.random.default_rng(5)
        for p0, q0 in rng.uniform(0.1, 1.2, size=(20, 2)):
            p, q = Rapidity.trivial(p0, 2), Rapidity.trivial(q0, 2)
            c_pq, report_pq = local_inversion(self.omega, p, q, tol=1e-10)
            c_qp, report_qp = local_inversion(self.omega, q, p, tol=1e-10)
            self.assertTrue(report_pq.passed and report_qp.passed)
            self.assertLessEqual(abs(c_pq - c_qp), 1e-10)

    def test_decoupled_weight(self):
        """Тест C = 1 для распавшейся вершины"""
        constant, report = local_inversion(decoupled_vertex_weight(2), 0.9, 0.2)
        self.assertEqual(constant, 1)
        self.assertEqual(report.relative, 0.0)

    def test_slmn_with_gauge(self):
        """Тест локальной инверсии решения sl(2|1) с калибровочными компонентами"""
        omega = slmn_vertex_weight(SlmnParams.unit_at_equal(2, 1, 0.4))
        p = Rapidity.vector([1.5, 0.7, 2.0, 0.8, 1.2, 0.9, 1.1])
        q = Rapidity.vector([0.6, 1.3, 1.0, 0.3, 0.5, 2.0, 0.8])
        _, report = local_inversion(omega, p, q)
        self.assertTrue(report.passed)

    def test_requires_decoupling(self):
        """Тест отказа для веса, не распадающегося при равных быстротах"""
        rng = np.random.default_rng(2)
        omega = VertexWeightFamily.tabulated(rng.normal(size=(2, 2, 2, 2)))
        with self.assertRaises(PreconditionError):
            local_inversion(omega, 0.5, 0.3)

    def test_not_proportional(self):
        """Тест веса, распадающегося при p = q, но без инверсии"""
        rng = np.random.default_rng(4)
        base = decoupled_vertex_weight(2).evaluate(0, 0).data
        perturbation = rng.normal(size=(2, 2, 2, 2))
        omega = VertexWeightFamily(2, lambda p, q: base + (complex(p) - complex(q)) * perturbation)
        with self.assertRaises(ProportionalityError):
            local_inversion(omega, 0.5, 0.3)


class TestGlobalInversion(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.omega = slmn_vertex_weight(SlmnParams.unit_at_equal(0, 2, 0.4))
        self.p, self.q = Rapidity.trivial(0.5, 2), Rapidity.trivial(0.3, 2)

    def test_torus_partition_function(self):
        """Тест Z = Tr Tᴹ"""
        T = transfer_matrix(self.omega, 2, self.p, self.q).array
        z = torus_partition_function(self.omega, 3, 2, self.p, self.q)
        self.assertAlmostEqual(z, np.trace(T @ T @ T))

    def test_demo_table(self):
        """Тест таблицы демонстрации глобальной инверсии"""
        table = global_inversion_demo(self.omega, [2, (2, 3)], self.p, self.q)
        self.assertEqual(list(table.columns), ["M", "N", "Z_pq", "Z_qp", "ratio"])
        self.assertEqual(table["N"].tolist(), [2, 3])
        self.assertTrue(all(np.isfinite(abs(r)) for r in table["ratio"]))

    def test_decoupled_demo_ratio(self):
        """Тест: для распавшейся вершины T - сдвиг, Z = 2ⁿ и отношение равно 4^(1/n)"""
        table = global_inversion_demo(decoupled_vertex_weight(2), [2, 3, 4, 5], 0.5, 0.3)
        for n, z, ratio in zip(table["N"], table["Z_pq"], table["ratio"]):
            self.assertAlmostEqual(z, 2 ** n, places=10)
            self.assertAlmostEqual(ratio, 4 ** (1 / n), places=12)
        magnitudes = [abs(r) for r in table["ratio"]]
        self.assertEqual(magnitudes, sorted(magnitudes, reverse=True))

    def test_size_cap(self):
        """Тест предела размерности тора"""
        with self.assertRaises(SizeCapError):
            global_inversion_demo(self.omega, [5], self.p, self.q, max_states=16)


if __name__ == '__main__':
    unittest.main()
