import sys
import os
import unittest
import tempfile
import shutil
import json

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import ExtentMismatchError, WeightFileError, WeightFileSchemaError
from src.tensor_core import max_abs_diff
from src.weight_io import (catalog_document, catalog_names, describe_catalog, load_weight_file,
                           save_weight_file, weights_from_dict, weights_to_dict)
from src.weight_models import (CheckerboardPair, IrfWeightFamily, PottsParams, Rapidity, SlmnParams,
                               SpinWeightPair, VertexWeightFamily, potts_spin_weights, slmn_vertex_weight)


class TestWeightFiles(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.temp_dir = tempfile.mkdtemp()
        self.p, self.q = Rapidity.trivial(0.7, 2), Rapidity.trivial(0.2, 2)

    def tearDown(self):
        """Очистка после тестов"""
        shutil.rmtree(self.temp_dir)

    def test_builtin_slmn(self):
        """Тест записи и чтения встроенного решения sl(m|n)"""
        family = slmn_vertex_weight(SlmnParams.unit_at_equal(1, 1, 0.4))
        path = os.path.join(self.temp_dir, "weights", "slmn.json")
        save_weight_file(family, path)
        with open(path, 'r', encoding='utf-8') as f:
            doc = json.load(f)
        self.assertEqual(doc["source"]["builtin"]["name"], "slmn")

        loaded = load_weight_file(path)
        self.assertLess(max_abs_diff(loaded.evaluate(self.p, self.q), family.evaluate(self.p, self.q)), 1e-14)

    def test_builtin_potts(self):
        """Тест записи и чтения модели Поттса"""
        pair = potts_spin_weights(PottsParams(3))
        loaded = weights_from_dict(weights_to_dict(pair))
        self.assertEqual(loaded.Q, 3)
        self.assertLess(max_abs_diff(loaded.evaluate_w(0.9, 0.4), pair.evaluate_w(0.9, 0.4)), 1e-14)

    def test_vertex_table(self):
        """Тест табличного вершинного веса"""
        data = np.arange(16, dtype=float).reshape(2, 2, 2, 2) + 1j
        path = os.path.join(self.temp_dir, "table.json")
        save_weight_file(VertexWeightFamily.tabulated(data), path)
        loaded = load_weight_file(path)
        np.testing.assert_array_equal(loaded.evaluate(0, 0).data, data)

    def test_string_entries(self):
        """Тест записи комплексных чисел строками"""
        doc = {"kind": "spin", "Q": 1,
               "source": {"table": {"data": [["2+1i"]], "data_barred": [["0.5"]]}}}
        pair = weights_from_dict(doc)
        self.assertIsInstance(pair, SpinWeightPair)
        self.assertEqual(pair.evaluate_w(0, 0)[0, 0], 2 + 1j)
        self.assertEqual(pair.evaluate_wbar(0, 0)[0, 0], 0.5 + 0j)

    def test_irf_extents(self):
        """Тест записи числа состояний белых граней"""
        family = IrfWeightFamily.tabulated(np.ones((2, 3, 2, 3)))
        doc = weights_to_dict(family)
        self.assertEqual((doc["Q"], doc["Qwhite"]), (2, 3))
        self.assertEqual(weights_from_dict(doc).face_extents, (2, 3, 2, 3))

    def test_checkerboard_table(self):
        """Тест шахматной пары с отдельной таблицей черных вершин"""
        plain = VertexWeightFamily.tabulated(np.ones((2, 2, 2, 2)))
        barred = VertexWeightFamily.tabulated(2 * np.ones((2, 2, 2, 2)))
        doc = weights_to_dict(CheckerboardPair(plain, barred))
        self.assertEqual(doc["kind"], "checkerboard-vertex")
        loaded = weights_from_dict(doc)
        self.assertEqual(loaded.barred.evaluate(0, 0)[0, 0, 0, 0], 2 + 0j)

    def test_derived_family_requires_rapidities(self):
        """Тест табулирования производного семейства"""
        family = VertexWeightFamily(2, lambda p, q: np.full((2, 2, 2, 2), complex(p) - complex(q)))
        with self.assertRaises(WeightFileError):
            weights_to_dict(family)
        doc = weights_to_dict(family, 0.5, 0.25)
        self.assertEqual(doc["source"]["table"]["p"], [0.5, 0.0])
        self.assertEqual(weights_from_dict(doc).evaluate(0, 0)[1, 1, 1, 1], 0.25 + 0j)

    def test_schema_errors(self):
        """Тест ошибок схемы файла весов"""
        bad_documents = [
            [],
            {"kind": "unknown", "Q": 2, "source": {"table": {}}},
            {"kind": "vertex", "Q": 0, "source": {"table": {}}},
            {"kind": "vertex", "Q": True, "source": {"table": {}}},
            {"kind": "vertex", "Q": 2, "source": {}},
            {"kind": "vertex", "Q": 2, "source": {"table": {}}},
            {"kind": "spin", "Q": 2, "source": {"builtin": {"name": "slmn", "params": {}}}},
            {"kind": "vertex", "Q": 3, "source": {"builtin": {"name": "slmn",
                                                             "params": {"m": 0, "n": 2, "eta": 0.4}}}},
            {"kind": "vertex", "Q": 2, "source": {"builtin": {"name": "other"}}},
        ]
        for doc in bad_documents:
            with self.assertRaises(WeightFileSchemaError, msg=str(doc)):
                weights_from_dict(doc)

    def test_extent_mismatch(self):
        """Тест несоответствия размерностей таблицы"""
        doc = {"kind": "vertex", "Q": 2, "source": {"table": {"data": np.ones((2, 2, 2)).tolist()}}}
        with self.assertRaises(ExtentMismatchError):
            weights_from_dict(doc)

    def test_broken_json(self):
        """Тест некорректного JSON"""
        path = os.path.join(self.temp_dir, "broken.json")
        with open(path, 'w', encoding='utf-8') as f:
            f.write("{kind")
        with self.assertRaises(WeightFileError):
            load_weight_file(path)


class TestCatalog(unittest.TestCase):

    def test_all_entries_load(self):
        """Тест: каждая запись каталога читается как файл весов"""
        for name in catalog_names():
            weights = weights_from_dict(catalog_document(name))
            self.assertIsNotNone(weights, name)

    def test_describe(self):
        """Тест описания каталога"""
        entries = describe_catalog()
        self.assertEqual([e["name"] for e in entries], catalog_names())
        by_name = {e["name"]: e for e in entries}
        self.assertEqual((by_name["slmn02"]["kind"], by_name["slmn02"]["Q"]), ("vertex", 2))
        self.assertEqual((by_name["potts3"]["kind"], by_name["potts3"]["Q"]), ("spin", 3))

    def test_unknown_name(self):
        """Тест отсутствующего решения"""
        with self.assertRaises(WeightFileSchemaError):
            catalog_document("missing")


if __name__ == '__main__':
    unittest.main()
