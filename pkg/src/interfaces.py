"""Абстрактные контракты, через которые численные модули и CLI видят инфраструктуру"""

from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional, Sequence


class ILogger(ABC):
    """Журнал диагностики; stdout в нем не используется"""

    @abstractmethod
    def info(self, message: str) -> None:
        """Информационное сообщение"""

    @abstractmethod
    def error(self, message: str) -> None:
        """Сообщение об ошибке"""

    @abstractmethod
    def warning(self, message: str) -> None:
        """Предупреждение"""

    @abstractmethod
    def debug(self, message: str) -> None:
        """Отладочное сообщение"""

    @abstractmethod
    def log_error(self, error: Exception, additional_info: Optional[Dict[str, Any]] = None) -> None:
        """Исключение с контекстом вычисления (подкоманда, испытание, быстроты)"""

    def flush(self) -> None:
        """Сбрасывает буферизованные записи; по умолчанию ничего не делает"""


class IOrderedRunner(ABC):
    """Исполнитель пакета испытаний с результатами в порядке отправки"""

    @abstractmethod
    def run_ordered(self, callables: Sequence[Callable[[], Any]]) -> List[Any]:
        """
        Выполняет функции без аргументов.

        Returns:
            List[Any]: Результаты в порядке callables независимо от числа потоков
        """
