"""
Преобразования между формулировками весов.

- Квадратный вес: четыре спиновых веса шахматной модели как вершинный вес
- IRF-вершинный вес как вершинный вес на тройках состояний
- Вершинный вес как спиновая пара на четверках состояний отрезков
- Спиновая пара как шахматная IRF-модель с одним состоянием белых граней
- Статистические суммы на малых торах для проверки эквивалентности решеток
"""

import itertools
import logging
from typing import Sequence, Tuple, Union

import numpy as np

from src.errors import ExtentMismatchError, ParameterError, RapidityFormError, SizeCapError
from src.tensor_core import DenseTensor, einsum_network
from src.weight_models import (CheckerboardPair, IrfVertexWeightFamily, IrfWeightFamily, Rapidity,
                               SpinWeightPair, VertexWeightFamily)

logger = logging.getLogger(__name__)

# Предел числа перебираемых конфигураций на торе
MAX_TORUS_CONFIGURATIONS = 1_000_000


# ---------------------------------------------------------------------------
# Квадратный вес
# ---------------------------------------------------------------------------

def square_weight_entries(pair: SpinWeightPair, p1, p2, q1, q2) -> DenseTensor:
    """
    Произведение четырех весов квадрата шахматной модели.

    ω[α][μ][λ][β] = W_{αμ}(p1,q1)·W̄_{μβ}(p1,q2)·W̄_{αλ}(p2,q1)·W_{λβ}(p2,q2)

    Args:
        pair: Спиновая пара весов
        p1, p2, q1, q2: Скалярные быстроты

    Returns:
        DenseTensor: Вершинный вес [α][μ][λ][β]
    """
    return einsum_network('am,mb,al,lb->amlb',
                          pair.evaluate_w(p1, q1), pair.evaluate_wbar(p1, q2),
                          pair.evaluate_wbar(p2, q1), pair.evaluate_w(p2, q2))


def _as_pair(value) -> Tuple:
    if isinstance(value, Rapidity) or not isinstance(value, (tuple, list)) or len(value) != 2:
        raise RapidityFormError(f"Ожидалась пара скалярных быстрот, получено {value!r}")
    return value[0], value[1]


class SquareWeightFamily(VertexWeightFamily):
    """
    Вершинное семейство на парах быстрот P = (p1, p2), Q = (q1, q2).

    Вторая пара входит в произведение в порядке (q2, q1): при P = Q вес
    распадается, а семейство удовлетворяет вершинному уравнению с множителем 1.
    """

    def __init__(self, pair: SpinWeightPair):
        super().__init__(pair.Q)
        self.pair = pair

    def _evaluate(self, p, q):
        p1, p2 = _as_pair(p)
        q1, q2 = _as_pair(q)
        return square_weight_entries(self.pair, p1, p2, q2, q1)


def square_weight_compose(pair: SpinWeightPair) -> SquareWeightFamily:
    """Вершинное семейство квадратных весов спиновой пары"""
    return SquareWeightFamily(pair)


# ---------------------------------------------------------------------------
# IRF-вершинный вес -> вершинный вес
# ---------------------------------------------------------------------------

def _irf_vertex_tensor_to_vertex(tensor: np.ndarray, Qf: int) -> np.ndarray:
    Qe = tensor.shape[0]
    faces = tensor.shape[4:]
    padded = np.zeros((Qe,) * 4 + (Qf,) * 4, dtype=np.complex128)
    padded[..., :faces[0], :faces[1], :faces[2], :faces[3]] = tensor
    # тройки: α̂ = (d,α,a), μ̂ = (a,μ,b), λ̂ = (d,λ,c), β̂ = (c,β,b)
    result = np.zeros((Qf, Qe, Qf) * 4, dtype=np.complex128)
    for a, b, c, d in itertools.product(range(Qf), repeat=4):
        result[d, :, a, a, :, b, d, :, c, c, :, b] = padded[:, :, :, :, a, b, c, d]
    Q = Qf * Qe * Qf
    return result.reshape((Q,) * 4)


def irf_vertex_to_vertex(W: Union[IrfVertexWeightFamily, CheckerboardPair]):
    """
    Отображает IRF-вершинные веса в вершинные на тройках (грань, ребро, грань).

    Составное состояние (f1, e, f2) имеет номер (f1·Qe + e)·Qf + f2.
    Несогласованные тройки (разные общие грани) получают нулевой вес.
    Грани с меньшим числом состояний дополняются нулями до Qf.

    Args:
        W: IRF-вершинное семейство или шахматная пара таких семейств

    Returns:
        VertexWeightFamily или CheckerboardPair вершинных семейств
    """
    if isinstance(W, CheckerboardPair):
        if not isinstance(W.plain, IrfVertexWeightFamily):
            raise ExtentMismatchError(f"Ожидалась IRF-вершинная пара, получено {W.kind}")
        Qf = max(W.plain.Qf, W.barred.Qf)
        return CheckerboardPair(_map_irf_vertex(W.plain, Qf), _map_irf_vertex(W.barred, Qf))
    return _map_irf_vertex(W, W.Qf)


def _map_irf_vertex(W: IrfVertexWeightFamily, Qf: int) -> VertexWeightFamily:
    Q = Qf * W.Qe * Qf

    def evaluate(p, q):
        return _irf_vertex_tensor_to_vertex(W.evaluate(p, q).data, Qf)

    logger.debug(f"IRF-вершинный вес отображен в вершинный с {Q} состояниями")
    return VertexWeightFamily(Q, evaluate)


# ---------------------------------------------------------------------------
# Вершинный вес -> спиновая пара
# ---------------------------------------------------------------------------

def _spin_from_plain(omega: np.ndarray) -> np.ndarray:
    # W_{a,b} = ω[a0][a3][b1][b2]: a - нижняя левая грань, b - верхняя правая
    Q = omega.shape[0]
    full = np.broadcast_to(omega[:, None, None, :, None, :, :, None], (Q,) * 8)
    return np.ascontiguousarray(full).reshape(Q ** 4, Q ** 4)


def _spin_from_barred(omega_bar: np.ndarray) -> np.ndarray:
    # W̄_{a,b} = ω̄[a2][b1][a3][b0]: a - верхняя левая грань, b - нижняя правая
    Q = omega_bar.shape[0]
    ordered = np.transpose(omega_bar, (0, 2, 3, 1))
    full = np.broadcast_to(ordered[None, None, :, :, :, :, None, None], (Q,) * 8)
    return np.ascontiguousarray(full).reshape(Q ** 4, Q ** 4)


def vertex_to_spin(omega: Union[VertexWeightFamily, CheckerboardPair]) -> SpinWeightPair:
    """
    Отображает вершинную модель на квадратной решетке в спиновую.

    Спин черной грани - четверка состояний ее отрезков (верх, лево, низ,
    право), номер ((s0·Q + s1)·Q + s2)·Q + s3. Каждый отрезок ограничивает
    ровно одну черную грань, поэтому вес зависит только от четырех отрезков
    вершины. Отображение неэкономно: Q⁴ спиновых состояний.

    Args:
        omega: Вершинное семейство (ω̄ = ω) или шахматная вершинная пара

    Returns:
        SpinWeightPair: Спиновая пара с Q⁴ состояниями
    """
    if isinstance(omega, CheckerboardPair):
        if not isinstance(omega.plain, VertexWeightFamily):
            raise ExtentMismatchError(f"Ожидалась вершинная пара, получено {omega.kind}")
        plain, barred = omega.plain, omega.barred
    else:
        plain = barred = omega
    Q = plain.Q
    return SpinWeightPair(
        Q ** 4,
        lambda p, q: _spin_from_plain(plain.evaluate(p, q).data),
        lambda p, q: _spin_from_barred(barred.evaluate(p, q).data),
    )


# ---------------------------------------------------------------------------
# Спиновая пара <-> шахматная IRF-модель
# ---------------------------------------------------------------------------

def embed_spin_as_checkerboard_irf(pair: SpinWeightPair) -> CheckerboardPair:
    """
    Спиновая пара как шахматная IRF-модель с одним состоянием белых граней.

    У plain-веса черные грани - нижняя левая и верхняя правая, он несет W̄;
    у barred-веса черные грани - нижняя правая и верхняя левая, он несет W
    с переставленными спинами.
    """
    Q = pair.Q

    def plain(p, q):
        return pair.evaluate_wbar(p, q).data[:, None, :, None]

    def barred(p, q):
        return pair.evaluate_w(p, q).data.T[None, :, None, :]

    return CheckerboardPair(IrfWeightFamily((Q, 1, Q, 1), plain), IrfWeightFamily((1, Q, 1, Q), barred))


def extract_spin_from_checkerboard_irf(pair: CheckerboardPair) -> SpinWeightPair:
    """Обратное вложение: спиновая пара из шахматной IRF-модели с белыми гранями размерности 1"""
    if not isinstance(pair.plain, IrfWeightFamily):
        raise ExtentMismatchError(f"Ожидалась шахматная IRF-пара, получено {pair.kind}")
    Qb, Qw = pair.plain.face_extents[0], pair.plain.face_extents[1]
    if Qw != 1:
        raise ParameterError(f"Белые грани должны иметь одно состояние, получено {Qw}")
    return SpinWeightPair(
        Qb,
        lambda p, q: pair.barred.evaluate(p, q).data[0, :, 0, :].T,
        lambda p, q: pair.plain.evaluate(p, q).data[:, 0, :, 0],
    )


def lift_irf_to_irf_vertex(w: Union[IrfWeightFamily, CheckerboardPair]):
    """IRF-веса как IRF-вершинные с одним состоянием на ребрах"""
    if isinstance(w, CheckerboardPair):
        return CheckerboardPair(lift_irf_to_irf_vertex(w.plain), lift_irf_to_irf_vertex(w.barred))
    return IrfVertexWeightFamily(
        1, w.face_extents, lambda p, q: w.evaluate(p, q).data[None, None, None, None])


def lift_vertex_to_irf_vertex(omega: Union[VertexWeightFamily, CheckerboardPair]):
    """Вершинные веса как IRF-вершинные с одним состоянием на гранях"""
    if isinstance(omega, CheckerboardPair):
        return CheckerboardPair(lift_vertex_to_irf_vertex(omega.plain), lift_vertex_to_irf_vertex(omega.barred))
    return IrfVertexWeightFamily(
        omega.Q, (1, 1, 1, 1), lambda p, q: omega.evaluate(p, q).data[..., None, None, None, None])


# ---------------------------------------------------------------------------
# Статистические суммы на торе
# ---------------------------------------------------------------------------

def _check_torus(rows: int, cols: int, configurations: int) -> None:
    if rows < 2 or cols < 2 or rows % 2 or cols % 2:
        raise ParameterError(f"Шахматный тор требует четных размеров не меньше 2, получено {rows}×{cols}")
    if configurations > MAX_TORUS_CONFIGURATIONS:
        raise SizeCapError(f"Перебор {configurations} конфигураций превышает предел {MAX_TORUS_CONFIGURATIONS}")


def vertex_torus_partition_function(omega: Union[VertexWeightFamily, CheckerboardPair], p, q,
                                    rows: int = 2, cols: int = 2) -> complex:
    """
    Статистическая сумма шахматной вершинной модели на торе rows×cols.

    Горизонтальные линии несут быстроту p, вертикальные - q. Вершина (i, j)
    получает ω при четном i + j и ω̄ при нечетном.
    """
    if isinstance(omega, CheckerboardPair):
        plain, barred = omega.plain.evaluate(p, q).data, omega.barred.evaluate(p, q).data
    else:
        plain = barred = omega.evaluate(p, q).data
    Q = plain.shape[0]
    segments = 2 * rows * cols
    _check_torus(rows, cols, Q ** segments)
    total = 0j
    for config in itertools.product(range(Q), repeat=segments):
        h = np.array(config[:rows * cols]).reshape(rows, cols)
        v = np.array(config[rows * cols:]).reshape(cols, rows)
        weight = 1 + 0j
        for i in range(rows):
            for j in range(cols):
                w = plain if (i + j) % 2 == 0 else barred
                weight *= w[h[i, (j - 1) % cols], v[j, (i - 1) % rows], v[j, i], h[i, j]]
                if weight == 0:
                    break
            if weight == 0:
                break
        total += weight
    return complex(total)


def spin_torus_partition_function(pair: SpinWeightPair, p, q, rows: int = 2, cols: int = 2) -> complex:
    """
    Статистическая сумма шахматной спиновой модели на торе rows×cols.

    Грань (i, j) лежит справа сверху от вершины (i, j) и черная при четном i + j.
    Вершина с четным i + j дает W между нижней левой и верхней правой гранями,
    с нечетным - W̄ между верхней левой и нижней правой.
    """
    W = pair.evaluate_w(p, q).data
    Wbar = pair.evaluate_wbar(p, q).data
    black = [(i, j) for i in range(rows) for j in range(cols) if (i + j) % 2 == 0]
    _check_torus(rows, cols, pair.Q ** len(black))
    index = {face: k for k, face in enumerate(black)}
    total = 0j
    for config in itertools.product(range(pair.Q), repeat=len(black)):
        weight = 1 + 0j
        for i in range(rows):
            for j in range(cols):
                if (i + j) % 2 == 0:
                    lower_left = config[index[((i - 1) % rows, (j - 1) % cols)]]
                    upper_right = config[index[(i, j)]]
                    weight *= W[lower_left, upper_right]
                else:
                    upper_left = config[index[(i, (j - 1) % cols)]]
                    lower_right = config[index[((i - 1) % rows, j)]]
                    weight *= Wbar[upper_left, lower_right]
        total += weight
    return complex(total)
