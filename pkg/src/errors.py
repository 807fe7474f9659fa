"""
Иерархия исключений инструментария.

Каждое исключение наследует YbxError и ближайший встроенный тип, поэтому
вызывающий код может перехватывать как YbxError, так и ValueError/ArithmeticError.
Человекочитаемые описания по имени класса лежат в src.config.ERROR_DESCRIPTIONS.
"""


class YbxError(Exception):
    """Базовое исключение инструментария"""


class ExtentMismatchError(YbxError, ValueError):
    """Размерности осей тензоров не совпадают"""


class InvalidAxesError(YbxError, ValueError):
    """Некорректная перестановка или повторяющаяся ось в свертке"""


class NonFiniteValueError(YbxError, ValueError):
    """NaN или бесконечность в весах или результатах"""


class RapidityFormError(YbxError, ValueError):
    """Быстрота не той формы (скаляр вместо вектора или неверная длина)"""


class SingularRapidityError(YbxError, ValueError):
    """Быстроты попали в полюс параметризации"""


class ParameterError(YbxError, ValueError):
    """Параметры модели нарушают свои инварианты"""


class ProportionalityError(YbxError, ArithmeticError):
    """Левая и правая части не пропорциональны"""


class IllConditionedError(YbxError, ArithmeticError):
    """Матрица плохо обусловлена для обращения"""


class PreconditionError(YbxError, ValueError):
    """Не выполнено предусловие операции (нет распада, R(0) != 1 и т.п.)"""


class SizeCapError(YbxError, ValueError):
    """Размер пространства состояний превышает настроенный предел"""


class ReflectionFitError(YbxError, ArithmeticError):
    """Диагональный анзац K не решает уравнение отражения"""


class SingularNetworkError(YbxError, ArithmeticError):
    """Система Кирхгофа вырождена"""


class QuadratureError(YbxError, ArithmeticError):
    """Численное интегрирование не сошлось"""


class WeightFileError(YbxError, ValueError):
    """Ошибка файла весов"""


class WeightFileSchemaError(WeightFileError):
    """Файл весов не соответствует схеме"""


class NetlistError(YbxError, ValueError):
    """Ошибка файла описания цепи"""
