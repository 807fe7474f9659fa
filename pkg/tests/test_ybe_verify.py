import sys
import os
import unittest

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import ProportionalityError
from src.weight_models import (CheckerboardPair, PottsParams, Rapidity, SlmnParams, VertexWeightFamily,
                               all_ones_spin_pair, constant_irf_weight, decoupled_vertex_weight,
                               potts_spin_weights, slmn_vertex_weight)
from src.ybe_verify import (estimate_scalar_factor, relabel_states, sample_rapidity_triples, verify_checkerboard,
                            verify_irf_ybe, verify_spin_star_triangle, verify_vertex_ybe)


class TestScalarFactor(unittest.TestCase):

    def test_estimate(self):
        """Тест оценки скаляра по наибольшему элементу правой части"""
        rhs = np.array([[1.0, 2.0], [0.5, -4.0]])
        scalar, gap = estimate_scalar_factor(3j * rhs, rhs)
        self.assertAlmostEqual(scalar, 3j)
        self.assertAlmostEqual(gap, 0.0)

    def test_zero_sides(self):
        """Тест нулевых частей"""
        zero = np.zeros((2, 2))
        self.assertEqual(estimate_scalar_factor(zero, zero), (1 + 0j, 0.0))
        with self.assertRaises(ProportionalityError):
            estimate_scalar_factor(np.ones((2, 2)), zero)


class TestVertexYbe(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.rng = np.random.default_rng(7)

    def _check_family(self, omega, Q, random_gauge=False):
        for p, q, r in sample_rapidity_triples(self.rng, 5, Q=Q, random_gauge=random_gauge):
            report = verify_vertex_ybe(omega, p, q, r, tol=1e-9)
            self.assertTrue(report.passed, f"невязка {report.relative:.3e}")

    def test_six_vertex(self):
        """Тест решения sl(0|2) (шестивершинная модель)"""
        self._check_family(slmn_vertex_weight(SlmnParams.unit_at_equal(0, 2, 0.4)), 2)

    def test_slmn_with_gauge(self):
        """Тест решений sl(m|n) со случайными калибровочными компонентами"""
        for m, n in ((1, 1), (2, 1), (0, 3)):
            omega = slmn_vertex_weight(SlmnParams.unit_at_equal(m, n, 0.4))
            self._check_family(omega, m + n, random_gauge=True)

    def test_slmn_suite(self):
        """Тест 100 случайных троек со случайными калибровкой и матрицей G для каждого sl(m|n)"""
        for m, n in ((0, 2), (0, 3), (1, 1), (2, 1)):
            Q = m + n
            G = np.ones((Q, Q), dtype=np.complex128)
            for a in range(Q):
                for b in range(a + 1, Q):
                    G[a, b] = self.rng.uniform(0.5, 2.0) * np.exp(1j * self.rng.uniform(-np.pi, np.pi))
                    G[b, a] = 1 / G[a, b]
            omega = slmn_vertex_weight(SlmnParams.unit_at_equal(m, n, 0.4, G=G))
            for p, q, r in sample_rapidity_triples(self.rng, 100, Q=Q, random_gauge=True):
                report = verify_vertex_ybe(omega, p, q, r, tol=1e-10)
                self.assertTrue(report.passed, f"sl({m}|{n}): невязка {report.relative:.3e}")

    def test_slmn_with_twist(self):
        """Тест решения sl(0|3) с матрицей G, где G_ρσ·G_σρ = 1"""
        G = np.array([[1, 2.0, 0.5j], [0.5, 1, 3.0], [-2j, 1 / 3, 1]])
        omega = slmn_vertex_weight(SlmnParams.unit_at_equal(0, 3, 0.4, G=G))
        self._check_family(omega, 3)

    def test_relabel_states(self):
        """Тест инвариантности относительно перестановки состояний"""
        omega = relabel_states(slmn_vertex_weight(SlmnParams.unit_at_equal(2, 1, 0.4)), [2, 0, 1])
        self._check_family(omega, 3)

    def test_decoupled_weight(self):
        """Тест распавшейся вершины при любых быстротах"""
        self._check_family(decoupled_vertex_weight(3), None)

    def test_random_weight_fails(self):
        """Тест случайного веса, не решающего уравнение"""
        table = self.rng.normal(size=(2, 2, 2, 2)) + 1j * self.rng.normal(size=(2, 2, 2, 2))
        omega = VertexWeightFamily.tabulated(table)
        report = verify_vertex_ybe(omega, 0.9, 0.5, 0.2, tol=1e-9)
        self.assertFalse(report.passed)
        self.assertEqual(len(report.worst_index), 6)
        self.assertEqual(report.to_dict()["pass"], False)


class TestSpinAndCheckerboard(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.rng = np.random.default_rng(3)

    def test_all_ones(self):
        """Тест пары из единиц: R = Q"""
        first, second = verify_spin_star_triangle(all_ones_spin_pair(3), 0.9, 0.5, 0.2)
        self.assertTrue(first.passed and second.passed)
        self.assertAlmostEqual(first.scalar_R, 3)
        self.assertTrue(first.details["R_equals_Rbar"])

    def test_potts(self):
        """Тест звезды–треугольника модели Поттса"""
        for N in (1, 2, 3):
            pair = potts_spin_weights(PottsParams(N))
            for p, q, r in sample_rapidity_triples(self.rng, 3):
                for transposed in (False, True):
                    reports = verify_spin_star_triangle(pair, p, q, r, tol=1e-9, transposed=transposed)
                    self.assertTrue(all(rep.passed for rep in reports), f"N={N}")

    def test_uniform_checkerboard(self):
        """Тест однородной шахматной пары sl(1|1)"""
        pair = CheckerboardPair.uniform(slmn_vertex_weight(SlmnParams.unit_at_equal(1, 1, 0.4)))
        for p, q, r in sample_rapidity_triples(self.rng, 3, Q=2):
            first, second = verify_checkerboard(pair, p, q, r)
            self.assertTrue(first.passed and second.passed)
            self.assertAlmostEqual(first.scalar_R, 1)

    def test_constant_irf(self):
        """Тест постоянного IRF-веса"""
        w = constant_irf_weight(2, 0.5)
        self.assertTrue(verify_irf_ybe(w, 0.9, 0.5, 0.2).passed)

    def test_sampling_is_reproducible(self):
        """Тест воспроизводимости случайных троек"""
        first = sample_rapidity_triples(np.random.default_rng(42), 4, Q=2, random_gauge=True)
        second = sample_rapidity_triples(np.random.default_rng(42), 4, Q=2, random_gauge=True)
        self.assertEqual(first, second)
        self.assertTrue(all(isinstance(x, Rapidity) and x.Q == 2 for triple in first for x in triple))


if __name__ == '__main__':
    unittest.main()
