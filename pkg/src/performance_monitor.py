"""
Мониторинг времени выполнения и памяти.

Метрики пишутся в журнал и, при заданном файле, в JSON. В поток
отчетов CLI они не попадают.
"""

import functools
import json
import os
import threading
import time
from contextlib import contextmanager
from typing import Any, Callable, Dict, List, Optional

import psutil

from src.base_service import BaseService
from src.interfaces import ILogger


class PerformanceMetric:
    """Значение метрики с временной меткой"""

    def __init__(self, name: str, value: float, timestamp: Optional[float] = None):
        self.name = name
        self.value = value
        self.timestamp = timestamp or time.time()

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "value": self.value, "timestamp": self.timestamp}


class PerformanceMonitor(BaseService):
    """
    Сервис метрик производительности.

    Отслеживает:
    - Время выполнения подкоманд и этапов (мс)
    - Резидентную память процесса (МБ)
    """

    def __init__(self, logger: ILogger, metrics_file: Optional[str] = None):
        """
        Args:
            logger (ILogger): Логгер
            metrics_file (str, optional): JSON-файл метрик; None отключает запись
        """
        super().__init__(logger)
        self.metrics_file = metrics_file
        self.metrics: List[PerformanceMetric] = []
        self.lock = threading.RLock()
        self.process = psutil.Process(os.getpid())

    def _do_initialize(self) -> bool:
        self.measure_memory_usage()
        return True

    def _do_shutdown(self) -> bool:
        self.measure_memory_usage()
        for name in sorted({m.name for m in self.metrics}):
            summary = self.get_summary_metrics(name)
            self._logger.debug(f"Метрика {name}: среднее {summary['avg']:.3f}, максимум {summary['max']:.3f}, "
                               f"измерений {summary['count']}")
        if self.metrics_file:
            self.save_metrics()
        return True

    def track_time(self, name: str) -> Callable:
        """
        Декоратор, записывающий время выполнения функции как метрику <name>_time.

        Args:
            name (str): Имя метрики
        """
        def decorator(func):
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                with self.measure(name):
                    return func(*args, **kwargs)
            return wrapper
        return decorator

    @contextmanager
    def measure(self, name: str):
        """Контекст, записывающий время выполнения блока"""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record_metric(f"{name}_time", (time.perf_counter() - start) * 1000)

    def record_metric(self, name: str, value: float) -> None:
        with self.lock:
            self.metrics.append(PerformanceMetric(name, float(value)))

    def get_summary_metrics(self, name: str) -> Dict[str, float]:
        """
        Статистика метрики.

        Returns:
            Dict[str, float]: min, max, avg, count
        """
        with self.lock:
            values = [m.value for m in self.metrics if m.name == name]
        if not values:
            return {"min": 0.0, "max": 0.0, "avg": 0.0, "count": 0}
        return {"min": min(values), "max": max(values), "avg": sum(values) / len(values), "count": len(values)}

    def measure_memory_usage(self) -> float:
        """Резидентная память процесса в МБ"""
        usage = self.process.memory_info().rss / (1024 * 1024)
        self.record_metric("memory_usage_mb", usage)
        return usage

    def save_metrics(self) -> None:
        """Дописывает накопленные метрики в JSON-файл"""
        with self.lock:
            pending = [m.to_dict() for m in self.metrics]
        existing: List[Dict[str, Any]] = []
        try:
            if os.path.exists(self.metrics_file) and os.path.getsize(self.metrics_file) > 0:
                with open(self.metrics_file, 'r', encoding='utf-8') as f:
                    existing = json.load(f)
        except (OSError, json.JSONDecodeError):
            self._logger.warning(f"Файл метрик {self.metrics_file} поврежден и будет перезаписан")
        try:
            directory = os.path.dirname(self.metrics_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.metrics_file, 'w', encoding='utf-8') as f:
                json.dump((existing + pending)[-10000:], f, ensure_ascii=False, indent=2)
        except OSError as e:
            self._logger.error(f"Ошибка при сохранении метрик: {e}")
            return
        with self.lock:
            self.metrics = []

    def _get_health_info(self) -> Dict[str, Any]:
        with self.lock:
            return {"metrics": len(self.metrics)}
