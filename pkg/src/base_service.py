"""Базовый класс для долгоживущих сервисов инструментария"""

from abc import ABC, abstractmethod
from typing import Any, Dict

from src.interfaces import ILogger


class BaseService(ABC):
    """
    Общий жизненный цикл сервиса: initialize → работа → shutdown.

    Дочерние классы реализуют _do_initialize() и при необходимости
    _do_shutdown() и _get_health_info().
    """

    def __init__(self, logger: ILogger):
        """
        Args:
            logger (ILogger): Логгер сервиса
        """
        self._logger = logger
        self._initialized = False
        self._logger.debug(f"Сервис {self.name} создан")

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def initialize(self) -> bool:
        """
        Запускает сервис через _do_initialize().

        Returns:
            bool: True, если сервис готов к работе
        """
        try:
            result = bool(self._do_initialize())
        except Exception as e:
            self._logger.log_error(e, {"service": self.name, "stage": "initialize"})
            self._initialized = False
            return False
        self._initialized = result
        if result:
            self._logger.debug(f"Сервис {self.name} запущен")
        else:
            self._logger.warning(f"Сервис {self.name} не удалось запустить")
        return result

    @abstractmethod
    def _do_initialize(self) -> bool:
        """Фактический запуск сервиса"""

    def is_initialized(self) -> bool:
        return self._initialized

    def shutdown(self) -> bool:
        """
        Останавливает сервис через _do_shutdown().

        Returns:
            bool: True, если сервис остановлен корректно
        """
        if not self._initialized:
            return True
        try:
            result = bool(self._do_shutdown())
        except Exception as e:
            self._logger.log_error(e, {"service": self.name, "stage": "shutdown"})
            return False
        if result:
            self._initialized = False
            self._logger.debug(f"Сервис {self.name} остановлен")
        else:
            self._logger.warning(f"Сервис {self.name} не удалось корректно остановить")
        return result

    def _do_shutdown(self) -> bool:
        return True

    def health_check(self) -> Dict[str, Any]:
        """
        Состояние сервиса.

        Returns:
            Dict[str, Any]: Имя, признак запуска, статус и сведения сервиса
        """
        info = {
            "service": self.name,
            "initialized": self._initialized,
            "status": "healthy" if self._initialized else "not_initialized",
        }
        info.update(self._get_health_info() or {})
        return info

    def _get_health_info(self) -> Dict[str, Any]:
        return {}
