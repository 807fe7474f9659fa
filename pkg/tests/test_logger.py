import sys
import os
import unittest
import logging
import tempfile
import shutil

# Добавляем путь к корневой директории проекта
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import SizeCapError
from src.logger import Logger


class TestLogger(unittest.TestCase):

    def setUp(self):
        """Подготовка окружения для тестов"""
        # Создаем временную директорию для логов
        self.temp_dir = tempfile.mkdtemp()
        self.log_file = os.path.join(self.temp_dir, "logs", "ybx.log")
        self.logger = Logger(log_level=logging.DEBUG, log_file=self.log_file, console=False)

    def tearDown(self):
        """Очистка после тестов"""
        for handler in list(self.logger.logger.handlers):
            handler.close()
        self.logger.logger.handlers.clear()
        shutil.rmtree(self.temp_dir)

    def read_log(self) -> str:
        self.logger.flush()
        with open(self.log_file, 'r', encoding='utf-8') as f:
            return f.read()

    def test_log_levels(self):
        """Тест различных уровней логирования"""
        self.logger.debug("Debug message")
        self.logger.info("Info message")
        self.logger.warning("Warning message")
        self.logger.error("Error message")

        content = self.read_log()
        for level in ("DEBUG", "INFO", "WARNING", "ERROR"):
            self.assertIn(level, content)

    def test_level_filter(self):
        """Тест отсечения сообщений ниже уровня"""
        logger = Logger(log_level=logging.WARNING, log_file=self.log_file, console=False)
        logger.info("hidden info")
        logger.warning("visible warning")
        logger.flush()
        with open(self.log_file, 'r', encoding='utf-8') as f:
            content = f.read()
        self.assertNotIn("hidden info", content)
        self.assertIn("visible warning", content)

    def test_error_logging(self):
        """Тест логирования ошибок с контекстом вычисления"""
        try:
            raise SizeCapError("Q^L = 65536 превышает предел")
        except SizeCapError as e:
            self.logger.log_error(e, {"subcommand": "operators transfer", "trial": 3})

        content = self.read_log()
        self.assertIn("SizeCapError", content)
        self.assertIn("Превышен предел", content)
        self.assertIn("trial=3", content)
        self.assertIn("Стек вызовов", content)

    def test_buffer_flush(self):
        """Тест буферизации информационных сообщений"""
        self.logger.info("buffered message")
        self.logger.flush()
        self.assertEqual(self.logger.buffered_logger.buffer, [])
        self.assertIn("buffered message", self.read_log())

    def test_without_file(self):
        """Тест логгера без файла журнала"""
        logger = Logger(log_file='', console=False)
        logger.error("no file")
        self.assertEqual(logger.logger.handlers, [])

    def test_error_descriptions(self):
        """Тест описаний ошибок"""
        descriptions = self.logger._load_error_descriptions()

        self.assertIn("ExtentMismatchError", descriptions)
        self.assertIn("SingularNetworkError", descriptions)
        self.assertIn("JSONDecodeError", descriptions)


if __name__ == '__main__':
    unittest.main()
