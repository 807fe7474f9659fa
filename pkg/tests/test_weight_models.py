import sys
import os
import unittest

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import ExtentMismatchError, ParameterError, RapidityFormError, SingularRapidityError
from src.tensor_core import max_abs_diff
from src.weight_models import (CheckerboardPair, IrfWeightFamily, PottsParams, Rapidity, SlmnParams,
                               VertexWeightFamily, all_ones_spin_pair, constant_irf_weight,
                               decoupled_vertex_weight, potts_rapidity_relation_check, potts_spin_weights,
                               potts_x, potts_xbar, scalar_value, slmn_vertex_weight, validate_weight)


class TestRapidity(unittest.TestCase):

    def test_scalar_and_vector(self):
        """Тест скалярной и векторной быстроты"""
        s = Rapidity.scalar(0.7)
        self.assertFalse(s.is_vector)
        self.assertEqual(s.value, 0.7 + 0j)
        v = Rapidity.trivial(0.3, 2)
        self.assertTrue(v.is_vector)
        self.assertEqual(v.Q, 2)
        self.assertEqual(v.value, 0.3 + 0j)
        self.assertEqual(v.component(-2), 1 + 0j)
        with self.assertRaises(RapidityFormError):
            v.component(3)

    def test_even_components_rejected(self):
        """Тест отказа для четного числа компонент"""
        with self.assertRaises(RapidityFormError):
            Rapidity((1, 2))
        with self.assertRaises(RapidityFormError):
            Rapidity.vector([1])

    def test_json(self):
        """Тест записи быстроты в JSON"""
        v = Rapidity.vector([1, 0.5, 2])
        self.assertEqual(Rapidity.from_json(v.to_json()), v)
        self.assertEqual(Rapidity.from_json([0.4, 0.0]), Rapidity.scalar(0.4))
        self.assertEqual(Rapidity.from_json("0.4"), Rapidity.scalar(0.4))

    def test_shift(self):
        """Тест сдвига компоненты с индексом 0"""
        v = Rapidity.trivial(0.3, 1).shift(0.1)
        self.assertAlmostEqual(v.value.real, 0.4)
        self.assertEqual(v.component(1), 1 + 0j)

    def test_scalar_value_rejects_vector(self):
        """Тест отказа scalar_value для вектора"""
        self.assertEqual(scalar_value(0.5), 0.5 + 0j)
        with self.assertRaises(RapidityFormError):
            scalar_value(Rapidity.trivial(0.5, 2))


class TestSlmnWeights(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.params = SlmnParams.unit_at_equal(1, 1, 0.4)
        self.omega = slmn_vertex_weight(self.params)

    def test_extents(self):
        """Тест размерностей веса sl(1|1)"""
        w = self.omega.evaluate(Rapidity.trivial(0.7, 2), Rapidity.trivial(0.3, 2))
        self.assertEqual(w.extents, (2, 2, 2, 2))

    def test_decouples_at_equal_rapidities(self):
        """Тест распада вершины при равных быстротах"""
        p = Rapidity.trivial(0.5, 2)
        w = self.omega.evaluate(p, p)
        self.assertLess(max_abs_diff(w, decoupled_vertex_weight(2).evaluate(p, p)), 1e-12)

    def test_requires_vector_rapidities(self):
        """Тест отказа для скалярных быстрот"""
        with self.assertRaises(RapidityFormError):
            self.omega.evaluate(0.7, 0.3)
        with self.assertRaises(RapidityFormError):
            self.omega.evaluate(Rapidity.trivial(0.7, 3), Rapidity.trivial(0.3, 3))

    def test_gauge_factor(self):
        """Тест калибровочного множителя p₊λ q₋β / (q₊α p₋μ)"""
        p = Rapidity.vector([2.0, 3.0, 0.7, 5.0, 7.0])
        q = Rapidity.vector([11.0, 13.0, 0.3, 17.0, 19.0])
        bare = self.omega.evaluate(Rapidity.trivial(0.7, 2), Rapidity.trivial(0.3, 2)).data
        gauged = self.omega.evaluate(p, q).data
        # α=1, μ=0, λ=1, β=0 (нумерация с нуля)
        factor = p.component(2) * q.component(-1) / (q.component(2) * p.component(-1))
        self.assertAlmostEqual(gauged[1, 0, 1, 0], bare[1, 0, 1, 0] * factor)

    def test_invalid_params(self):
        """Тест нарушения G_ρσ·G_σρ = 1"""
        params = SlmnParams.build(0, 2, 0.4, G=[[1, 2], [2, 1]])
        self.assertTrue(params.violations())
        with self.assertRaises(ParameterError):
            slmn_vertex_weight(params)
        self.assertTrue(validate_weight(SlmnParams.build(1, 1, 0.4, epsilon=[1, 1])))

    def test_classical_singular_at_equal(self):
        """Тест полюса нормировки классического семейства"""
        omega = slmn_vertex_weight(SlmnParams.classical(0.01))
        p = Rapidity.trivial(0.5, 2)
        with self.assertRaises(SingularRapidityError):
            omega.evaluate(p, p)

    def test_valid_family_has_no_diagnostics(self):
        """Тест диагностики корректного семейства"""
        self.assertEqual(validate_weight(self.omega), [])
        self.assertEqual(validate_weight(self.params), [])


class TestFamilies(unittest.TestCase):

    def test_tabulated_extents(self):
        """Тест проверки размерностей табличных весов"""
        with self.assertRaises(ExtentMismatchError):
            VertexWeightFamily.tabulated(np.ones((2, 2, 2, 3)))
        family = IrfWeightFamily.tabulated(np.ones((2, 3, 2, 3)))
        self.assertEqual(family.face_extents, (2, 3, 2, 3))
        self.assertEqual(family.source["table"]["p"], None)

    def test_checkerboard_pair_extents(self):
        """Тест согласования граней шахматной пары"""
        plain = IrfWeightFamily.tabulated(np.ones((2, 3, 2, 3)))
        barred = IrfWeightFamily.tabulated(np.ones((3, 2, 3, 2)))
        self.assertEqual(CheckerboardPair(plain, barred).kind, "checkerboard-irf")
        with self.assertRaises(ExtentMismatchError):
            CheckerboardPair(plain, plain)
        with self.assertRaises(ExtentMismatchError):
            CheckerboardPair(decoupled_vertex_weight(2), constant_irf_weight(2))

    def test_spin_pair(self):
        """Тест спиновой пары из единиц"""
        pair = all_ones_spin_pair(3)
        self.assertEqual(pair.evaluate_w(0.1, 0.2).extents, (3, 3))
        self.assertEqual(validate_weight(pair), [])


class TestPotts(unittest.TestCase):

    def test_x_and_xbar_are_inverse(self):
        """Тест x(u)·x̄(u) = 1"""
        params = PottsParams(2)
        self.assertAlmostEqual(abs(potts_x(params, 0.3) * potts_xbar(params, 0.3)), 1.0)

    def test_limit_x_is_tan(self):
        """Тест x(u) = tan u в режиме N→0"""
        params = PottsParams(0, limit=True)
        self.assertAlmostEqual(potts_x(params, 0.4).real, np.tan(0.4))
        self.assertEqual(params.sqrt_n, 0.0)

    def test_pole(self):
        """Тест полюса x̄ при u = 0"""
        with self.assertRaises(SingularRapidityError):
            potts_xbar(PottsParams(2), 0.0)

    def test_invalid_n(self):
        """Тест отказа для N >= 4 и нецелого N"""
        with self.assertRaises(ParameterError):
            potts_spin_weights(PottsParams(4))
        with self.assertRaises(ParameterError):
            potts_spin_weights(PottsParams(5))
        with self.assertRaises(ParameterError):
            potts_spin_weights(PottsParams(2.5))
        with self.assertRaises(ParameterError):
            potts_spin_weights(PottsParams(0, limit=True))

    def test_weights(self):
        """Тест W = 1 + √N x(p-q) δ"""
        params = PottsParams(3)
        w = potts_spin_weights(params).evaluate_w(0.9, 0.4).data
        x = potts_x(params, 0.5)
        self.assertAlmostEqual(w[0, 1], 1 + 0j)
        self.assertAlmostEqual(w[1, 1], 1 + np.sqrt(3) * x)

    def test_rapidity_relation(self):
        """Тест соотношения быстрот для N = 1, 2, 3 и режима N→0"""
        for params in (PottsParams(1), PottsParams(2), PottsParams(3), PottsParams(0, limit=True)):
            report = potts_rapidity_relation_check(params, 0.9, 0.5, 0.2, tol=1e-10)
            self.assertTrue(report.passed, f"N={params.N}: {report.relative}")


if __name__ == '__main__':
    unittest.main()
