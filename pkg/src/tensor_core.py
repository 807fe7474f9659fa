"""
Плотные комплексные тензоры и их свертки.

Все веса при фиксированных быстротах хранятся как DenseTensor: неизменяемый
массив complex128 в построчном (row-major) порядке, внешние оси первыми.
Результат свертки всегда упорядочен так: свободные оси a, затем свободные оси b.
"""

import logging
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.errors import ExtentMismatchError, InvalidAxesError, NonFiniteValueError

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, float, int, str, Sequence[float]]


def parse_complex(value: ComplexLike) -> complex:
    """
    Разбирает комплексное число в форматах файлов и CLI.

    Допустимы пары [re, im], числа и строки "a", "a+bi", "a-bi".

    Args:
        value: Значение для разбора

    Returns:
        complex: Конечное комплексное число
    """
    if isinstance(value, bool):
        raise ValueError(f"Логическое значение не является комплексным числом: {value!r}")
    if isinstance(value, (int, float, complex, np.number)):
        result = complex(value)
    elif isinstance(value, str):
        text = value.strip().replace(' ', '').replace('i', 'j')
        if not text:
            raise ValueError("Пустая строка вместо комплексного числа")
        result = complex(text)
    elif isinstance(value, (list, tuple)) and len(value) == 2 \
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        result = complex(float(value[0]), float(value[1]))
    else:
        raise ValueError(f"Не удалось разобрать комплексное число: {value!r}")
    if not (np.isfinite(result.real) and np.isfinite(result.imag)):
        raise NonFiniteValueError(f"Неконечное комплексное число: {value!r}")
    return result


def format_complex(value: complex) -> List[float]:
    """Представляет комплексное число парой [re, im]"""
    value = complex(value)
    return [float(value.real), float(value.imag)]


class DenseTensor:
    """
    Неизменяемый плотный комплексный тензор.

    Ранг 0 соответствует скаляру. Данные копируются при создании и
    помечаются как доступные только для чтения.
    """

    __slots__ = ("_data",)

    def __init__(self, data, extents: Iterable[int] = None):
        """
        Args:
            data: Массив, вложенные списки или плоская последовательность
            extents: Размерности осей; если заданы, data трактуется как плоский массив
        """
        array = np.array(data, dtype=np.complex128)
        if extents is not None:
            extents = tuple(int(e) for e in extents)
            if any(e < 1 for e in extents):
                raise ExtentMismatchError(f"Размерности осей должны быть положительными: {extents}")
            expected = int(np.prod(extents, dtype=np.int64)) if extents else 1
            if array.size != expected:
                raise ExtentMismatchError(
                    f"Длина данных {array.size} не равна произведению размерностей {expected}")
            array = array.reshape(extents)
        elif array.ndim and 0 in array.shape:
            raise ExtentMismatchError(f"Пустая ось в тензоре: {array.shape}")
        if not np.all(np.isfinite(array)):
            raise NonFiniteValueError("Тензор содержит NaN или бесконечность")
        array.setflags(write=False)
        self._data = array

    @classmethod
    def scalar(cls, value: complex) -> "DenseTensor":
        return cls(np.asarray(value, dtype=np.complex128))

    @classmethod
    def identity(cls, dim: int) -> "DenseTensor":
        return cls(np.eye(dim, dtype=np.complex128))

    @property
    def extents(self) -> Tuple[int, ...]:
        return tuple(self._data.shape)

    @property
    def rank(self) -> int:
        return self._data.ndim

    @property
    def data(self) -> np.ndarray:
        """Массив только для чтения"""
        return self._data

    def flat(self) -> np.ndarray:
        """Плоская копия данных в построчном порядке"""
        return self._data.reshape(-1).copy()

    def item(self) -> complex:
        if self._data.size != 1:
            raise ExtentMismatchError(f"Тензор с размерностями {self.extents} не является скаляром")
        return complex(self._data.reshape(-1)[0])

    def scale(self, factor: complex) -> "DenseTensor":
        return DenseTensor(self._data * complex(factor))

    def to_nested(self) -> list:
        """Вложенные списки пар [re, im] для файлов весов"""
        if self.rank == 0:
            return format_complex(self.item())
        return np.stack([self._data.real, self._data.imag], axis=-1).tolist()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __getitem__(self, index) -> complex:
        value = self._data[index]
        if isinstance(value, np.ndarray):
            return DenseTensor(value)
        return complex(value)

    def __repr__(self) -> str:
        return f"DenseTensor(extents={self.extents})"


def as_array(tensor) -> np.ndarray:
    if isinstance(tensor, DenseTensor):
        return tensor.data
    return np.asarray(tensor, dtype=np.complex128)


def contract(a: DenseTensor, b: DenseTensor, pairs: Sequence[Tuple[int, int]]) -> DenseTensor:
    """
    Свертка двух тензоров по парам осей.

    Args:
        a: Первый тензор
        b: Второй тензор
        pairs: Список пар (ось a, ось b), по которым идет суммирование

    Returns:
        DenseTensor: Свободные оси a, затем свободные оси b
    """
    arr_a, arr_b = as_array(a), as_array(b)
    axes_a = [int(p[0]) for p in pairs]
    axes_b = [int(p[1]) for p in pairs]
    if len(set(axes_a)) != len(axes_a) or len(set(axes_b)) != len(axes_b):
        raise InvalidAxesError(f"Повторяющаяся ось в парах свертки: {list(pairs)}")
    for ax, bx in zip(axes_a, axes_b):
        if not (0 <= ax < arr_a.ndim) or not (0 <= bx < arr_b.ndim):
            raise InvalidAxesError(f"Ось вне диапазона: ({ax}, {bx})")
        if arr_a.shape[ax] != arr_b.shape[bx]:
            raise ExtentMismatchError(
                f"Оси ({ax}, {bx}) имеют разные размерности {arr_a.shape[ax]} и {arr_b.shape[bx]}")
    return DenseTensor(np.tensordot(arr_a, arr_b, axes=(axes_a, axes_b)))


def _check_permutation(perm: Sequence[int], rank: int) -> Tuple[int, ...]:
    perm = tuple(int(i) for i in perm)
    if sorted(perm) != list(range(rank)):
        raise InvalidAxesError(f"{perm} не является перестановкой 0..{rank - 1}")
    return perm


def permute_axes(a: DenseTensor, perm: Sequence[int]) -> DenseTensor:
    """
    Переставляет оси: ось k результата есть ось perm[k] исходного тензора.

    Args:
        a: Исходный тензор
        perm: Перестановка 0..rank-1

    Returns:
        DenseTensor: Тензор с переставленными осями
    """
    arr = as_array(a)
    perm = _check_permutation(perm, arr.ndim)
    return DenseTensor(np.transpose(arr, perm))


def inverse_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    perm = _check_permutation(perm, len(perm))
    return tuple(int(i) for i in np.argsort(perm))


def compose_permutations(first: Sequence[int], second: Sequence[int]) -> Tuple[int, ...]:
    """Перестановка, равная применению first, затем second"""
    first = _check_permutation(first, len(first))
    second = _check_permutation(second, len(first))
    return tuple(first[k] for k in second)


def max_abs_diff(a: DenseTensor, b: DenseTensor) -> float:
    """
    Максимум модуля поэлементной разности.

    Args:
        a: Первый тензор
        b: Второй тензор той же формы

    Returns:
        float: max |a - b|
    """
    arr_a, arr_b = as_array(a), as_array(b)
    if arr_a.shape != arr_b.shape:
        raise ExtentMismatchError(f"Разные размерности: {arr_a.shape} и {arr_b.shape}")
    return float(np.max(np.abs(arr_a - arr_b))) if arr_a.size else 0.0


def einsum_network(subscripts: str, *operands) -> DenseTensor:
    """
    Свертка сети тензоров по нотации Эйнштейна.

    Args:
        subscripts: Строка вида 'ab,bc->ac'
        operands: Тензоры (DenseTensor или массивы)

    Returns:
        DenseTensor: Результат свертки
    """
    arrays = [as_array(op) for op in operands]
    terms = subscripts.split('->')[0].split(',')
    if len(terms) != len(arrays):
        raise InvalidAxesError(f"Ожидалось {len(terms)} тензоров, получено {len(arrays)}")
    for term, arr in zip(terms, arrays):
        if len(term) != arr.ndim:
            raise ExtentMismatchError(f"Индексы '{term}' не соответствуют рангу {arr.ndim}")
    try:
        result = np.einsum(subscripts, *arrays, optimize=True)
    except ValueError as e:
        raise ExtentMismatchError(f"Несовместимые размерности в свертке '{subscripts}': {e}") from e
    return DenseTensor(result)
