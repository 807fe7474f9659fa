"""
Журнал диагностики ybx.

stdout принадлежит потоку отчета, поэтому журнал пишет:
- ошибки в stderr
- все сообщения выбранного уровня в файл с ротацией
Отладочные и информационные сообщения пакетных испытаний копятся в буфере
и сбрасываются пачкой.
"""

import os
import sys
import logging
import threading
import time
import traceback
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, List, Optional, Tuple

from src.config import ERROR_DESCRIPTIONS
from src.interfaces import ILogger

LOGGER_NAME = "ybx_logger"
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


class BufferedLogger:
    """Буфер отладочных и информационных записей"""

    def __init__(self, logger: logging.Logger, buffer_size: int = 20, flush_interval: float = 10.0):
        self.logger = logger
        self.buffer: List[Tuple[int, str]] = []
        self.buffer_size = buffer_size
        self.flush_interval = flush_interval
        self.last_flush = time.monotonic()
        self.lock = threading.Lock()

    def append(self, level: int, msg: str) -> None:
        with self.lock:
            self.buffer.append((level, msg))
            due = len(self.buffer) >= self.buffer_size or time.monotonic() - self.last_flush >= self.flush_interval
        if due:
            self.flush()

    def flush(self) -> None:
        with self.lock:
            pending, self.buffer = self.buffer, []
            self.last_flush = time.monotonic()
        for level, msg in pending:
            self.logger.log(level, msg)

    def emit_now(self, level: int, msg: str) -> None:
        # Предупреждения и ошибки идут мимо буфера, но после накопленных записей
        self.flush()
        self.logger.log(level, msg)


def _format_context(context: Dict[str, Any]) -> str:
    """Контекст вычисления в виде 'ключ=значение' в порядке ключей"""
    return ", ".join(f"{key}={context[key]!r}" for key in sorted(context))


class Logger(ILogger):
    """
    Реализация ILogger поверх logging.

    Файл журнала ротируется по размеру (5 МБ, три архива). Консольный
    обработчик пропускает только ошибки.
    """

    def __init__(self, log_level: int = logging.INFO, log_file: str = os.path.join('logs', 'ybx.log'),
                 console: bool = True):
        """
        Args:
            log_level (int): Уровень детализации журнала
            log_file (str): Путь к файлу журнала; пустая строка отключает файл
            console (bool): Выводить ли ошибки в stderr
        """
        self.log_level = log_level
        self.log_file = log_file
        self.error_descriptions = self._load_error_descriptions()

        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(log_level)
        self.logger.propagate = False
        # Повторное создание (тесты, несколько запусков cli_main) заменяет обработчики
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

        formatter = logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')
        if console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(logging.ERROR)
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)
        if log_file:
            self._add_file_handler(log_file, formatter)

        self.buffered_logger = BufferedLogger(self.logger)
        self.debug(f"Журнал ybx открыт, уровень {logging.getLevelName(log_level)}")

    def _add_file_handler(self, log_file: str, formatter: logging.Formatter) -> None:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(log_file, maxBytes=5 * 1024 * 1024, backupCount=3, encoding='utf-8')
        file_handler.setLevel(self.log_level)
        file_handler.setFormatter(formatter)
        self.logger.addHandler(file_handler)

    def _load_error_descriptions(self) -> Dict[str, str]:
        """Описания классов исключений для сообщений журнала"""
        return dict(ERROR_DESCRIPTIONS)

    def info(self, message: str) -> None:
        if self.log_level <= logging.INFO:
            self.buffered_logger.append(logging.INFO, message)

    def debug(self, message: str) -> None:
        if self.log_level <= logging.DEBUG:
            self.buffered_logger.append(logging.DEBUG, message)

    def warning(self, message: str) -> None:
        self.buffered_logger.emit_now(logging.WARNING, message)

    def error(self, message: str) -> None:
        self.buffered_logger.emit_now(logging.ERROR, message)

    def flush(self) -> None:
        self.buffered_logger.flush()

    def log_error(self, error: Exception, additional_info: Optional[Dict[str, Any]] = None) -> None:
        """
        Записывает исключение с описанием и контекстом вычисления.

        Args:
            error (Exception): Исключение
            additional_info (Dict[str, Any], optional): Подкоманда, номер испытания, быстроты
        """
        error_type = type(error).__name__
        parts = [f"Ошибка [{error_type}]: {error}"]
        description = self.error_descriptions.get(error_type)
        if description:
            parts.append(f"({description})")
        if additional_info:
            parts.append(f"Контекст: {_format_context(additional_info)}")
        self.error(" ".join(parts))

        # Стек только при активном исключении
        if sys.exc_info()[0] is not None:
            self.error(f"Стек вызовов:\n{traceback.format_exc()}")
