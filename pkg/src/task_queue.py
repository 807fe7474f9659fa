"""
Пул рабочих потоков для пакетных испытаний.

Испытания (проверки случайных троек быстрот, точки сетки K и т.п.)
выполняются параллельно, а результаты собираются в порядке отправки,
поэтому отчет не зависит от числа потоков.
"""

import queue
import threading
import time
from typing import Any, Callable, Dict, List, Optional, Sequence

from src.base_service import BaseService
from src.interfaces import ILogger, IOrderedRunner


class Task:
    """Одно испытание в очереди"""

    def __init__(self, func: Callable, args: Sequence = (), kwargs: Optional[Dict] = None):
        self.func = func
        self.args = tuple(args)
        self.kwargs = kwargs or {}
        self.started_at: Optional[float] = None
        self.completed_at: Optional[float] = None
        self.result: Any = None
        self.error: Optional[BaseException] = None
        self.status = "pending"  # pending, running, completed, failed
        self.done = threading.Event()

    def run(self) -> None:
        """Выполняет функцию; исключение сохраняется, а не пробрасывается"""
        self.started_at = time.time()
        self.status = "running"
        try:
            self.result = self.func(*self.args, **self.kwargs)
            self.status = "completed"
        except Exception as e:
            self.error = e
            self.status = "failed"
        finally:
            self.completed_at = time.time()
            self.done.set()


class TaskQueue(BaseService, IOrderedRunner):
    """Очередь испытаний с фиксированным числом рабочих потоков"""

    def __init__(self, logger: ILogger, num_workers: int = 1):
        """
        Args:
            logger (ILogger): Логгер
            num_workers (int): Число рабочих потоков (флаг --jobs)
        """
        if num_workers < 1:
            raise ValueError(f"Число рабочих потоков должно быть положительным: {num_workers}")
        self.num_workers = num_workers
        self.task_queue: "queue.Queue[Optional[Task]]" = queue.Queue()
        self.workers: List[threading.Thread] = []
        self.lock = threading.RLock()
        self.stats = {"completed": 0, "failed": 0, "total": 0, "busy_seconds": 0.0}
        super().__init__(logger)

    def _do_initialize(self) -> bool:
        # Один поток: задачи выполняются в вызывающем потоке
        if self.num_workers == 1:
            return True
        for i in range(self.num_workers):
            worker = threading.Thread(target=self._worker_loop, name=f"TrialWorker-{i}", daemon=True)
            self.workers.append(worker)
            worker.start()
        self._logger.debug(f"Запущено {self.num_workers} рабочих потоков")
        return True

    def _do_shutdown(self) -> bool:
        stats = self.get_stats()
        self._logger.debug(f"Испытаний {stats['total']}, ошибок {stats['failed']}, занято {stats['busy_seconds']:.3f} с")
        for _ in self.workers:
            self.task_queue.put(None)
        for worker in self.workers:
            worker.join(timeout=5.0)
        alive = [w.name for w in self.workers if w.is_alive()]
        self.workers = []
        if alive:
            self._logger.warning(f"Потоки не завершились: {', '.join(alive)}")
            return False
        return True

    def _worker_loop(self) -> None:
        while True:
            task = self.task_queue.get()
            try:
                # None - сигнал остановки
                if task is None:
                    break
                task.run()
                self._account(task)
            finally:
                self.task_queue.task_done()

    def _account(self, task: Task) -> None:
        with self.lock:
            self.stats["completed" if task.status == "completed" else "failed"] += 1
            self.stats["busy_seconds"] += task.completed_at - task.started_at

    def add_task(self, func: Callable, args: Sequence = (), kwargs: Optional[Dict] = None) -> Task:
        """
        Ставит задачу в очередь (или выполняет сразу, если потоков нет).

        Returns:
            Task: Задача; ее завершение отмечается событием task.done
        """
        task = Task(func, args, kwargs)
        with self.lock:
            self.stats["total"] += 1
        if self.workers:
            self.task_queue.put(task)
        else:
            task.run()
            self._account(task)
        return task

    def run_ordered(self, callables: Sequence[Callable[[], Any]]) -> List[Any]:
        """
        Выполняет функции без аргументов и возвращает результаты в порядке отправки.

        Если какие-то задачи завершились ошибкой, после ожидания всех задач
        пробрасывается ошибка первой из них по порядку.

        Args:
            callables: Функции испытаний

        Returns:
            List[Any]: Результаты в исходном порядке
        """
        tasks = [self.add_task(func) for func in callables]
        for task in tasks:
            task.done.wait()
        for task in tasks:
            if task.error is not None:
                raise task.error
        return [task.result for task in tasks]

    def get_stats(self) -> Dict[str, Any]:
        with self.lock:
            stats = dict(self.stats)
        stats["workers"] = self.num_workers
        stats["pending"] = self.task_queue.qsize()
        return stats

    def _get_health_info(self) -> Dict[str, Any]:
        return self.get_stats()
