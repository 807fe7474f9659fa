import sys
import os
import io
import json
import unittest
from unittest.mock import MagicMock, patch
import tempfile
import shutil

import numpy as np

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli import EXIT_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE, RunConfig, build_parser, build_run_config, \
    cli_main, parse_rapidity
from src.config import Config
from src.errors import ParameterError
from src.interfaces import ILogger
from src.network_appendix import ResistorNetwork, save_netlist
from src.weight_io import catalog_names, save_weight_file
from src.weight_models import Rapidity, VertexWeightFamily


class TestCli(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.temp_dir = tempfile.mkdtemp()
        self.env = patch.dict(os.environ, {"YBX_LOG_FILE": "", "YBX_METRICS_FILE": "", "YBX_SEED": "0"})
        self.env.start()
        self.logger = MagicMock(spec=ILogger)

    def tearDown(self):
        """Очистка после тестов"""
        self.env.stop()
        shutil.rmtree(self.temp_dir)

    def run_cli(self, *argv):
        stream = io.StringIO()
        code = cli_main(list(argv), config=Config(), logger=self.logger, stream=stream)
        records = [json.loads(line) for line in stream.getvalue().splitlines() if line]
        return code, records

    def test_catalog_list(self):
        """Тест списка встроенных решений"""
        code, records = self.run_cli("catalog", "list")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(records[0]["record"], "header")
        self.assertEqual(records[-1]["record"], "summary")
        self.assertEqual([r["name"] for r in records[1:-1]], catalog_names())

    def test_catalog_emit(self):
        """Тест записи файла весов из каталога"""
        target = os.path.join(self.temp_dir, "slmn02.json")
        code, records = self.run_cli("catalog", "emit", "slmn02", "--to", target)
        self.assertEqual(code, EXIT_OK)
        with open(target, 'r', encoding='utf-8') as f:
            self.assertEqual(json.load(f)["kind"], "vertex")
        self.assertEqual(records[1]["document"]["Q"], 2)

    def test_verify_builtin(self):
        """Тест пакетной проверки встроенного решения"""
        code, records = self.run_cli("verify", "--builtin", "slmn02", "--trials", "3", "--seed", "7")
        self.assertEqual(code, EXIT_OK)
        checks = [r for r in records if r["record"] == "check"]
        self.assertEqual(len(checks), 3)
        self.assertTrue(all(r["pass"] for r in checks))
        self.assertEqual(records[0]["seed"], 7)
        self.assertEqual((records[-1]["passed"], records[-1]["failed"], records[-1]["errors"]), (3, 0, 0))

    def test_deterministic_output(self):
        """Тест воспроизводимости отчета при одном зерне и разном числе потоков"""
        _, first = self.run_cli("verify", "--builtin", "slmn11", "--trials", "4", "--seed", "11")
        _, second = self.run_cli("verify", "--builtin", "slmn11", "--trials", "4", "--seed", "11", "--jobs", "3")
        self.assertEqual(first, second)
        _, other = self.run_cli("verify", "--builtin", "slmn11", "--trials", "4", "--seed", "12")
        self.assertNotEqual(first[1]["p"], other[1]["p"])

    def test_verify_random_weights_fails(self):
        """Тест кода 1 для весов, не решающих уравнение"""
        path = os.path.join(self.temp_dir, "random.json")
        rng = np.random.default_rng(3)
        save_weight_file(VertexWeightFamily.tabulated(rng.normal(size=(2, 2, 2, 2))), path)
        code, records = self.run_cli("verify", "--weights", path, "--trials", "2")
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(records[-1]["pass"])

    def test_missing_file(self):
        """Тест кода 3 для отсутствующего файла весов"""
        code, records = self.run_cli("verify", "--weights", os.path.join(self.temp_dir, "missing.json"))
        self.assertEqual(code, EXIT_IO)
        self.assertEqual(records[-1]["record"], "summary")
        self.logger.log_error.assert_called()

    def test_usage_errors(self):
        """Тест кода 2 для некорректных аргументов"""
        code, _ = self.run_cli("verify", "--builtin", "slmn02", "--tol", "-1")
        self.assertEqual(code, EXIT_USAGE)
        with self.assertRaises(SystemExit) as ctx:
            with patch('sys.stderr', new_callable=io.StringIO):
                self.run_cli("verify")
        self.assertEqual(ctx.exception.code, 2)

    def test_invalid_environment(self):
        """Тест кода 2 для некорректной конфигурации окружения"""
        with patch.dict(os.environ, {"YBX_TOLERANCE": "abc"}):
            code, records = self.run_cli("catalog", "list")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(records, [])

    def test_operators_ybe(self):
        """Тест матричной R-формы"""
        code, records = self.run_cli("operators", "ybe", "--builtin", "slmn02", "--trials", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(records[-1]["passed"], 2)

    def test_operators_cybe(self):
        """Тест исследования сходимости классического предела"""
        code, records = self.run_cli("operators", "cybe")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len([r for r in records if r["record"] == "cybe_row"]), 3)
        self.assertEqual(records[-2]["equation"], "cybe_convergence")
        self.assertEqual(records[-1]["passed"], 1)

    def test_gaussian_check(self):
        """Тест гауссовой звезды–треугольника"""
        code, records = self.run_cli("gaussian", "check")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len([r for r in records if r["record"] == "check"]), 2)

    def test_net_equiv_and_output_file(self):
        """Тест эквивалентного сопротивления с записью отчета в файл"""
        netlist = os.path.join(self.temp_dir, "net.json")
        save_netlist(ResistorNetwork(["A", "B", "C"], [("A", "B", 1.0), ("B", "C", 3.0), ("A", "C", 4.0)]), netlist)
        output = os.path.join(self.temp_dir, "report.ndjson")
        code = cli_main(["net", "equiv", "--input", netlist, "--between", "A,C", "--output", output],
                        config=Config(), logger=self.logger)
        self.assertEqual(code, EXIT_OK)
        with open(output, 'r', encoding='utf-8') as f:
            records = [json.loads(line) for line in f]
        self.assertAlmostEqual(records[1]["Z"][0], 2.0)

    def test_table_format(self):
        """Тест табличного формата отчета"""
        stream = io.StringIO()
        code = cli_main(["catalog", "list", "--format", "table"], config=Config(), logger=self.logger,
                        stream=stream)
        self.assertEqual(code, EXIT_OK)
        lines = stream.getvalue().splitlines()
        self.assertTrue(lines[0].startswith("# ybx catalog list"))
        self.assertIn("pass=True", lines[-1])


class TestRunConfig(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        self.env = patch.dict(os.environ, {"YBX_SEED": "5", "YBX_TOLERANCE": "1e-6", "YBX_JOBS": "2"})
        self.env.start()

    def tearDown(self):
        """Очистка после тестов"""
        self.env.stop()

    def test_environment_defaults(self):
        """Тест значений по умолчанию из окружения"""
        args = build_parser().parse_args(["verify", "--builtin", "slmn02"])
        config = build_run_config(args, Config())
        self.assertEqual((config.seed, config.tol, config.jobs, config.trials), (5, 1e-6, 2, 10))
        self.assertEqual(config.subcommand, "verify")
        self.assertEqual(config.options["builtin"], "slmn02")

    def test_flags_override_environment(self):
        """Тест приоритета флагов над окружением"""
        args = build_parser().parse_args(["operators", "reflection", "--builtin", "slmn02", "--seed", "9",
                                          "--tol", "1e-3", "--trials", "0"])
        with self.assertRaises(ParameterError):
            build_run_config(args, Config())
        args.trials = 1
        config = build_run_config(args, Config())
        self.assertEqual((config.subcommand, config.seed, config.tol), ("operators reflection", 9, 1e-3))

    def test_validation(self):
        """Тест проверки параметров запуска"""
        with self.assertRaises(ParameterError):
            RunConfig("verify", seed=-1)
        with self.assertRaises(ParameterError):
            RunConfig("verify", rapidity_range=(1.0, 1.0))
        with self.assertRaises(ParameterError):
            RunConfig("verify", fmt="xml")

    def test_parse_rapidity(self):
        """Тест разбора быстрот из строки"""
        self.assertEqual(parse_rapidity("0.5"), Rapidity.scalar(0.5))
        self.assertEqual(parse_rapidity("0.5,0.2"), (Rapidity.scalar(0.5), Rapidity.scalar(0.2)))
        self.assertTrue(parse_rapidity("[[1,0],[0.5,0],[1,0]]").is_vector)
        self.assertIsNone(parse_rapidity(None))


if __name__ == '__main__':
    unittest.main()
