"""Фабрика компонентов инструментария"""

import logging

from src.config import Config
from src.interfaces import ILogger
from src.logger import Logger
from src.performance_monitor import PerformanceMonitor
from src.service_container import ServiceContainer
from src.task_queue import TaskQueue


class ToolkitFactory:
    """Создает логгер и контейнер сервисов для запуска CLI"""

    @staticmethod
    def create_logger(config: Config) -> Logger:
        level = logging.getLevelName(config.log_level)
        if not isinstance(level, int):
            level = logging.INFO
        return Logger(log_level=level, log_file=config.log_file)

    @staticmethod
    def create_container(config, logger: ILogger) -> ServiceContainer:
        """
        Создает и запускает сервисы.

        Args:
            config: Config или RunConfig (используются jobs и metrics_file)
            logger: Логгер

        Returns:
            ServiceContainer: Контейнер с сервисами task_queue и performance_monitor
        """
        container = ServiceContainer(logger)
        container.register("task_queue", TaskQueue(logger, num_workers=config.jobs))
        container.register("performance_monitor", PerformanceMonitor(logger, config.metrics_file or None))
        container.initialize_all()
        return container
