"""Контейнер сервисов инструментария"""

from typing import Any, Dict, Optional

from src.base_service import BaseService
from src.interfaces import ILogger


class ServiceContainer:
    """
    Реестр сервисов запуска CLI.

    Сервисы запускаются в порядке регистрации и останавливаются в обратном.
    """

    def __init__(self, logger: ILogger):
        """
        Args:
            logger (ILogger): Логгер контейнера
        """
        self._logger = logger
        self._services: Dict[str, BaseService] = {}
        self._initialized = False

    def register(self, service_name: str, service: BaseService) -> bool:
        """
        Регистрирует сервис под именем.

        Args:
            service_name (str): Имя сервиса
            service (BaseService): Экземпляр сервиса

        Returns:
            bool: False, если имя занято или объект не является сервисом
        """
        if service_name in self._services:
            self._logger.warning(f"Сервис '{service_name}' уже зарегистрирован")
            return False
        if not isinstance(service, BaseService):
            self._logger.error(f"Объект '{service_name}' не является экземпляром BaseService")
            return False
        self._services[service_name] = service
        self._logger.debug(f"Сервис '{service_name}' зарегистрирован")
        return True

    def get(self, service_name: str) -> Optional[BaseService]:
        service = self._services.get(service_name)
        if service is None:
            self._logger.warning(f"Сервис '{service_name}' не найден в контейнере")
        return service

    def __contains__(self, service_name: str) -> bool:
        return service_name in self._services

    def initialize_all(self) -> bool:
        """
        Запускает все сервисы.

        Returns:
            bool: True, если запустились все
        """
        if self._initialized:
            return True
        failed = [name for name, service in self._services.items() if not service.initialize()]
        if failed:
            self._logger.error(f"Не удалось запустить сервисы: {', '.join(failed)}")
            return False
        self._initialized = True
        self._logger.debug(f"Запущено сервисов: {len(self._services)}")
        return True

    def shutdown_all(self) -> bool:
        """
        Останавливает сервисы в порядке, обратном регистрации.

        Returns:
            bool: True, если все сервисы остановлены корректно
        """
        if not self._initialized:
            return True
        success = True
        for name in reversed(list(self._services)):
            if not self._services[name].shutdown():
                self._logger.error(f"Ошибка при остановке сервиса '{name}'")
                success = False
        if success:
            self._initialized = False
        return success

    def get_health_report(self) -> Dict[str, Any]:
        return {
            "container_initialized": self._initialized,
            "total_services": len(self._services),
            "services": {name: service.health_check() for name, service in self._services.items()},
        }
