import os
from typing import List, Tuple

from dotenv import load_dotenv

# Загружаем переменные окружения из файла .env
load_dotenv()

# Словарь с описаниями ошибок для расширенного логирования
ERROR_DESCRIPTIONS = {
    'ExtentMismatchError': 'Размерности тензоров не совпадают.',
    'InvalidAxesError': 'Некорректная перестановка осей или повтор оси в свертке.',
    'NonFiniteValueError': 'В весах или результате обнаружены NaN или бесконечность.',
    'RapidityFormError': 'Быстрота имеет неверную форму или длину.',
    'SingularRapidityError': 'Быстроты попали в полюс параметризации весов.',
    'ParameterError': 'Параметры модели нарушают инварианты.',
    'ProportionalityError': 'Левая и правая части уравнения не пропорциональны.',
    'IllConditionedError': 'Трансфер-матрица плохо обусловлена, обращение отклонено.',
    'PreconditionError': 'Не выполнено предусловие операции.',
    'SizeCapError': 'Превышен предел размера пространства состояний.',
    'ReflectionFitError': 'Диагональная K-матрица не найдена в пределах допуска.',
    'SingularNetworkError': 'Система уравнений Кирхгофа вырождена (несвязная внутренняя часть).',
    'QuadratureError': 'Численное интегрирование не сошлось.',
    'WeightFileError': 'Ошибка чтения файла весов.',
    'WeightFileSchemaError': 'Файл весов не соответствует схеме.',
    'NetlistError': 'Ошибка в описании электрической цепи.',
    'FileNotFoundError': 'Файл не найден.',
    'JSONDecodeError': 'Ошибка при разборе JSON.',
    'KeyboardInterrupt': 'Работа прервана вручную.',
}


class Config:
    """Класс для работы с конфигурацией приложения"""

    def __init__(self):
        """
        Инициализация конфигурации с загрузкой параметров
        из переменных окружения и .env файла
        """
        load_dotenv()  # Загружаем переменные из .env файла
        self._pending: List[str] = []

        # Воспроизводимость и точность
        self.seed = self._read_int('YBX_SEED', 0)
        self.tolerance = self._read_float('YBX_TOLERANCE', 1e-9)
        self.jobs = self._read_int('YBX_JOBS', 1)

        # Пределы численных операций
        self.max_states = self._read_int('YBX_MAX_STATES', 4096)
        self.derivative_step = self._read_float('YBX_DERIVATIVE_STEP', 1e-5)
        self.condition_limit = self._read_float('YBX_CONDITION_LIMIT', 1e12)
        self.rapidity_low = self._read_float('YBX_RAPIDITY_LOW', 0.1)
        self.rapidity_high = self._read_float('YBX_RAPIDITY_HIGH', 1.2)

        # Логирование и метрики
        self.log_level = os.getenv('YBX_LOG_LEVEL', 'INFO').upper()
        self.log_file = os.getenv('YBX_LOG_FILE', os.path.join('logs', 'ybx.log'))
        self.metrics_file = os.getenv('YBX_METRICS_FILE', os.path.join('logs', 'ybx_metrics.json'))
        self.enable_performance_monitoring = os.getenv('YBX_PERFORMANCE_MONITORING', 'true').lower() == 'true'

    def _read_int(self, name: str, default: int) -> int:
        raw = os.getenv(name)
        if raw is None or raw.strip() == '':
            return default
        try:
            return int(raw)
        except ValueError:
            self._defer_problem(f"{name}: ожидалось целое число, получено '{raw}'")
            return default

    def _read_float(self, name: str, default: float) -> float:
        raw = os.getenv(name)
        if raw is None or raw.strip() == '':
            return default
        try:
            return float(raw)
        except ValueError:
            self._defer_problem(f"{name}: ожидалось число, получено '{raw}'")
            return default

    def _defer_problem(self, message: str) -> None:
        self._pending.append(message)

    def validate(self) -> Tuple[bool, List[str]]:
        """
        Проверяет корректность параметров конфигурации.

        Returns:
            Tuple[bool, List[str]]: Признак корректности и список найденных проблем
        """
        problems = list(self._pending)
        if not 0 <= self.seed < 2 ** 64:
            problems.append("YBX_SEED должен быть 64-битным беззнаковым целым")
        if self.tolerance <= 0:
            problems.append("YBX_TOLERANCE должен быть положительным")
        if self.jobs < 1:
            problems.append("YBX_JOBS должен быть не меньше 1")
        if self.max_states < 1:
            problems.append("YBX_MAX_STATES должен быть положительным")
        if self.derivative_step <= 0:
            problems.append("YBX_DERIVATIVE_STEP должен быть положительным")
        if self.condition_limit <= 1:
            problems.append("YBX_CONDITION_LIMIT должен быть больше 1")
        if not self.rapidity_low < self.rapidity_high:
            problems.append("YBX_RAPIDITY_LOW должен быть меньше YBX_RAPIDITY_HIGH")
        return not problems, problems
