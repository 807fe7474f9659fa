import sys
import os
import unittest

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.converters import (embed_spin_as_checkerboard_irf, extract_spin_from_checkerboard_irf,
                            irf_vertex_to_vertex, lift_irf_to_irf_vertex, lift_vertex_to_irf_vertex,
                            spin_torus_partition_function, square_weight_compose, square_weight_entries,
                            vertex_to_spin, vertex_torus_partition_function)
from src.errors import ParameterError, RapidityFormError
from src.tensor_core import max_abs_diff
from src.weight_models import (CheckerboardPair, IrfWeightFamily, PottsParams, Rapidity, SlmnParams,
                               VertexWeightFamily, potts_spin_weights, slmn_vertex_weight)
from src.ybe_verify import verify_checkerboard, verify_spin_star_triangle, verify_vertex_ybe


class TestSquareWeight(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.pair = potts_spin_weights(PottsParams(2))
        self.family = square_weight_compose(self.pair)

    def test_entries(self):
        """Тест произведения четырех весов квадрата"""
        entries = square_weight_entries(self.pair, 0.9, 0.6, 0.5, 0.2).data
        W, Wb = self.pair.evaluate_w, self.pair.evaluate_wbar
        expected = W(0.9, 0.5)[1, 0] * Wb(0.9, 0.2)[0, 1] * Wb(0.6, 0.5)[1, 1] * W(0.6, 0.2)[1, 1]
        self.assertAlmostEqual(entries[1, 0, 1, 1], expected)

    def test_family_swaps_second_pair(self):
        """Тест: семейство берет вторую пару в порядке (q2, q1), а прямой порядок не решает уравнение"""
        composed = self.family.evaluate((0.9, 0.6), (0.5, 0.2)).data
        swapped = square_weight_entries(self.pair, 0.9, 0.6, 0.2, 0.5).data
        literal = square_weight_entries(self.pair, 0.9, 0.6, 0.5, 0.2).data
        self.assertLess(max_abs_diff(composed, swapped), 1e-14)
        self.assertGreater(max_abs_diff(composed, literal), 1e-3)
        direct = VertexWeightFamily(2, lambda p, q: square_weight_entries(self.pair, p[0], p[1], q[0], q[1]).data)
        report = verify_vertex_ybe(direct, (0.9, 0.6), (0.5, 0.2), (0.3, 1.1), tol=1e-9)
        self.assertFalse(report.passed)

    def test_vertex_ybe(self):
        """Тест вершинного уравнения для квадратных весов модели Поттса"""
        rng = np.random.default_rng(5)
        for _ in range(3):
            values = rng.uniform(0.1, 1.2, size=6)
            P, Q, R = (tuple(values[2 * k:2 * k + 2]) for k in range(3))
            report = verify_vertex_ybe(self.family, P, Q, R, tol=1e-9)
            self.assertTrue(report.passed, f"невязка {report.relative:.3e}")

    def test_requires_pairs(self):
        """Тест отказа для скалярной быстроты"""
        with self.assertRaises(RapidityFormError):
            self.family.evaluate(Rapidity.scalar(0.5), (0.1, 0.2))


class TestIrfVertexMap(unittest.TestCase):

    def test_single_face_state_is_identity_map(self):
        """Тест: при одном состоянии граней отображение возвращает исходный вес"""
        omega = slmn_vertex_weight(SlmnParams.unit_at_equal(1, 1, 0.4))
        mapped = irf_vertex_to_vertex(lift_vertex_to_irf_vertex(omega))
        p, q = Rapidity.trivial(0.7, 2), Rapidity.trivial(0.3, 2)
        self.assertEqual(mapped.Q, 2)
        self.assertLess(max_abs_diff(mapped.evaluate(p, q), omega.evaluate(p, q)), 1e-15)

    def test_inconsistent_triples_are_zero(self):
        """Тест нулевых весов для несогласованных троек"""
        w = IrfWeightFamily.tabulated(np.ones((2, 2, 2, 2)))
        mapped = irf_vertex_to_vertex(lift_irf_to_irf_vertex(w))
        data = mapped.evaluate(0.5, 0.2).data
        self.assertEqual(mapped.Q, 4)
        # α̂ = (d,α,a), μ̂ = (a,μ,b): номер (f1·Qe + e)·Qf + f2 с Qe = 1
        alpha, mu = 0 * 2 + 1, 0 * 2 + 0  # (0,·,1) и (0,·,0): a не совпадает
        self.assertEqual(np.count_nonzero(data[alpha, mu]), 0)
        self.assertEqual(np.count_nonzero(data), 16)

    def test_checkerboard_pair(self):
        """Тест отображения шахматной пары"""
        plain = IrfWeightFamily.tabulated(np.ones((2, 3, 2, 3)))
        barred = IrfWeightFamily.tabulated(np.ones((3, 2, 3, 2)))
        mapped = irf_vertex_to_vertex(lift_irf_to_irf_vertex(CheckerboardPair(plain, barred)))
        self.assertEqual(mapped.kind, "checkerboard-vertex")
        self.assertEqual(mapped.plain.Q, 9)


class TestSpinMaps(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.pair = potts_spin_weights(PottsParams(3))

    def test_embedding_matches_spin_equations(self):
        """Тест: шахматная IRF-модель дает те же невязки, что спиновая"""
        embedded = embed_spin_as_checkerboard_irf(self.pair)
        spin = verify_spin_star_triangle(self.pair, 0.9, 0.5, 0.2)
        irf = verify_checkerboard(embedded, 0.9, 0.5, 0.2)
        for a, b in zip(spin, irf):
            self.assertTrue(b.passed)
            self.assertAlmostEqual(a.relative, b.relative, delta=1e-12)

    def test_extract_roundtrip(self):
        """Тест обратного вложения"""
        pair = extract_spin_from_checkerboard_irf(embed_spin_as_checkerboard_irf(self.pair))
        self.assertLess(max_abs_diff(pair.evaluate_w(0.9, 0.4), self.pair.evaluate_w(0.9, 0.4)), 1e-15)
        self.assertLess(max_abs_diff(pair.evaluate_wbar(0.9, 0.4), self.pair.evaluate_wbar(0.9, 0.4)), 1e-15)

    def test_extract_requires_single_white_state(self):
        """Тест отказа для белых граней с несколькими состояниями"""
        plain = IrfWeightFamily.tabulated(np.ones((2, 2, 2, 2)))
        with self.assertRaises(ParameterError):
            extract_spin_from_checkerboard_irf(CheckerboardPair.uniform(plain))

    def test_vertex_to_spin_torus(self):
        """Тест равенства статистических сумм вершинной и спиновой моделей на торе"""
        rng = np.random.default_rng(9)
        plain = VertexWeightFamily.tabulated(rng.uniform(0.5, 1.5, size=(2, 2, 2, 2)))
        barred = VertexWeightFamily.tabulated(rng.uniform(0.5, 1.5, size=(2, 2, 2, 2)))
        pair = CheckerboardPair(plain, barred)
        spin = vertex_to_spin(pair)
        self.assertEqual(spin.Q, 16)
        z_vertex = vertex_torus_partition_function(pair, 0.0, 0.0)
        z_spin = spin_torus_partition_function(spin, 0.0, 0.0)
        self.assertAlmostEqual(z_vertex, z_spin, delta=1e-9 * abs(z_vertex))

    def test_torus_size_checks(self):
        """Тест требований к размерам тора"""
        with self.assertRaises(ParameterError):
            spin_torus_partition_function(self.pair, 0.9, 0.4, rows=3, cols=2)


if __name__ == '__main__':
    unittest.main()
