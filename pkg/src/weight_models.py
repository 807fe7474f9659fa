"""
Формулировки весов и встроенные решения.

Модуль содержит:
- Быстроты (скалярные и векторные с 2Q+1 компонентами)
- Семейства весов: вершинные, спиновые пары, IRF, смешанные IRF-вершинные
  и шахматные пары
- Решение sl(m|n) с калибровочными множителями и решение модели Поттса
- Проверку инвариантов параметров и семейств

Соглашение о вершинном весе: массив w[α][μ][λ][β] хранит ω^{λβ}_{αμ}(p,q),
линия p несет состояния α → β, линия q несет μ → λ. Индексы состояний
внутри программы начинаются с нуля.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import (ExtentMismatchError, NonFiniteValueError, ParameterError,
                        RapidityFormError, SingularRapidityError, YbxError)
from src.reports import ResidualReport, residual_report
from src.tensor_core import DenseTensor, parse_complex

logger = logging.getLogger(__name__)

# Порог полюса для тригонометрических параметризаций
POLE_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Rapidity:
    """
    Быстрота: скаляр (одна компонента) или вектор с компонентами -Q..+Q.

    Для вектора компонента с индексом 0 играет роль p₀, остальные входят
    в калибровочные множители весов sl(m|n).
    """

    components: Tuple[complex, ...]

    def __post_init__(self):
        comps = tuple(parse_complex(c) if not isinstance(c, complex) else c for c in self.components)
        if len(comps) % 2 != 1:
            raise RapidityFormError(f"Число компонент быстроты должно быть нечетным, получено {len(comps)}")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in comps):
            raise NonFiniteValueError("Быстрота содержит неконечные компоненты")
        object.__setattr__(self, 'components', comps)

    @classmethod
    def scalar(cls, value) -> "Rapidity":
        return cls((parse_complex(value),))

    @classmethod
    def vector(cls, components: Sequence) -> "Rapidity":
        comps = tuple(parse_complex(c) for c in components)
        if len(comps) < 3:
            raise RapidityFormError("Векторная быстрота должна иметь не менее трех компонент")
        return cls(comps)

    @classmethod
    def trivial(cls, value, Q: int) -> "Rapidity":
        """Векторная быстрота с единичными калибровочными компонентами"""
        comps = [1 + 0j] * (2 * Q + 1)
        comps[Q] = parse_complex(value)
        return cls(tuple(comps))

    @property
    def is_vector(self) -> bool:
        return len(self.components) > 1

    @property
    def Q(self) -> int:
        return len(self.components) // 2

    @property
    def value(self) -> complex:
        """Компонента с индексом 0"""
        return self.components[len(self.components) // 2]

    def component(self, k: int) -> complex:
        if abs(k) > self.Q:
            raise RapidityFormError(f"Индекс компоненты {k} вне диапазона -{self.Q}..{self.Q}")
        return self.components[k + self.Q]

    def shift(self, h) -> "Rapidity":
        comps = list(self.components)
        comps[self.Q] = comps[self.Q] + complex(h)
        return Rapidity(tuple(comps))

    def to_json(self):
        if not self.is_vector:
            return [self.value.real, self.value.imag]
        return [[c.real, c.imag] for c in self.components]

    @classmethod
    def from_json(cls, obj) -> "Rapidity":
        if isinstance(obj, (int, float, str)) and not isinstance(obj, bool):
            return cls.scalar(obj)
        if isinstance(obj, (list, tuple)):
            if len(obj) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj):
                return cls.scalar(obj)
            return cls.vector(obj)
        raise RapidityFormError(f"Некорректная запись быстроты: {obj!r}")


RapidityLike = Union[Rapidity, complex, float, int]


def as_rapidity(value: RapidityLike) -> Rapidity:
    if isinstance(value, Rapidity):
        return value
    return Rapidity.scalar(value)


def scalar_value(value: RapidityLike) -> complex:
    """Значение скалярной быстроты; вектор здесь недопустим"""
    if isinstance(value, Rapidity):
        if value.is_vector:
            raise RapidityFormError("Ожидалась скалярная быстрота, получен вектор")
        return value.value
    return parse_complex(value)


class WeightFamily(ABC):
    """
    Базовый класс семейства весов: отображение пары быстрот в тензор.

    evaluate() вызывает _evaluate() и проверяет размерности результата.
    Атрибут source описывает происхождение для файлов весов:
    {"builtin": {...}} для встроенных решений, {"table": {...}} для таблиц,
    None для производных семейств (результатов конвертеров).
    """

    kind = ""

    def __init__(self, extents: Sequence[int], evaluator: Optional[Callable] = None):
        self._extents = tuple(int(e) for e in extents)
        if any(e < 1 for e in self._extents):
            raise ExtentMismatchError(f"Размерности должны быть положительными: {self._extents}")
        self._evaluator = evaluator
        self.source: Optional[Dict] = None

    @property
    def extents(self) -> Tuple[int, ...]:
        return self._extents

    def evaluate(self, p, q) -> DenseTensor:
        """
        Вычисляет веса при заданных быстротах.

        Args:
            p: Быстрота первой линии
            q: Быстрота второй линии

        Returns:
            DenseTensor: Веса с фиксированными размерностями
        """
        data = self._evaluate(p, q)
        tensor = data if isinstance(data, DenseTensor) else DenseTensor(data)
        if tensor.extents != self._extents:
            raise ExtentMismatchError(
                f"Семейство {self.kind} вернуло размерности {tensor.extents}, ожидалось {self._extents}")
        return tensor

    def __call__(self, p, q) -> DenseTensor:
        return self.evaluate(p, q)

    def _evaluate(self, p, q):
        if self._evaluator is None:
            raise NotImplementedError(f"{self.__class__.__name__} не задает вычислитель весов")
        return self._evaluator(p, q)

    @classmethod
    @abstractmethod
    def from_extents(cls, extents: Sequence[int], evaluator: Callable) -> "WeightFamily":
        """Создает семейство по размерностям тензора"""

    @classmethod
    def tabulated(cls, data, p=None, q=None) -> "WeightFamily":
        """
        Семейство, не зависящее от быстрот: всегда возвращает таблицу.

        Быстроты p, q сохраняются только как происхождение таблицы.
        """
        tensor = data if isinstance(data, DenseTensor) else DenseTensor(data)
        family = cls.from_extents(tensor.extents, lambda _p, _q: tensor)
        family.source = {"table": {"p": p, "q": q, "data": tensor}}
        return family


class VertexWeightFamily(WeightFamily):
    """Вершинные веса ω^{λβ}_{αμ}(p,q), тензор [α][μ][λ][β]"""

    kind = "vertex"

    def __init__(self, Q: int, evaluator: Optional[Callable] = None):
        super().__init__((Q,) * 4, evaluator)

    @property
    def Q(self) -> int:
        return self._extents[0]

    @classmethod
    def from_extents(cls, extents, evaluator):
        extents = tuple(extents)
        if len(extents) != 4 or len(set(extents)) != 1:
            raise ExtentMismatchError(f"Вершинный вес должен иметь размерности [Q,Q,Q,Q], получено {extents}")
        return cls(extents[0], evaluator)


class IrfWeightFamily(WeightFamily):
    """
    IRF-веса w^{dc}_{ab}(p,q), тензор [a][b][c][d].

    a - нижняя левая грань, b - нижняя правая, c - верхняя правая,
    d - верхняя левая. Размерности граней могут различаться
    (шахматная модель с разными числами состояний на черных и белых гранях).
    """

    kind = "irf"

    def __init__(self, face_extents: Sequence[int], evaluator: Optional[Callable] = None):
        face_extents = tuple(face_extents)
        if len(face_extents) != 4:
            raise ExtentMismatchError(f"IRF-вес имеет четыре грани, получено {face_extents}")
        super().__init__(face_extents, evaluator)

    @property
    def face_extents(self) -> Tuple[int, ...]:
        return self._extents

    @property
    def Q(self) -> int:
        return max(self._extents)

    @classmethod
    def from_extents(cls, extents, evaluator):
        return cls(tuple(extents), evaluator)


class IrfVertexWeightFamily(WeightFamily):
    """Смешанные веса W^{λβ}_{αμ}|^{dc}_{ab}(p,q), тензор [α][μ][λ][β][a][b][c][d]"""

    kind = "irf-vertex"

    def __init__(self, Qe: int, face_extents: Sequence[int], evaluator: Optional[Callable] = None):
        face_extents = tuple(face_extents)
        if len(face_extents) != 4:
            raise ExtentMismatchError(f"IRF-вершинный вес имеет четыре грани, получено {face_extents}")
        super().__init__((Qe,) * 4 + face_extents, evaluator)

    @property
    def Qe(self) -> int:
        return self._extents[0]

    @property
    def face_extents(self) -> Tuple[int, ...]:
        return self._extents[4:]

    @property
    def Qf(self) -> int:
        return max(self.face_extents)

    @classmethod
    def from_extents(cls, extents, evaluator):
        extents = tuple(extents)
        if len(extents) != 8 or len(set(extents[:4])) != 1:
            raise ExtentMismatchError(f"IRF-вершинный вес должен иметь ранг 8, получено {extents}")
        return cls(extents[0], extents[4:], evaluator)


class SpinWeightPair:
    """Спиновые веса W_{ab}(p,q) и W̄_{ab}(p,q), матрицы Q×Q"""

    kind = "spin"

    def __init__(self, Q: int, w_evaluator: Optional[Callable] = None,
                 wbar_evaluator: Optional[Callable] = None):
        if Q < 1:
            raise ExtentMismatchError(f"Число спиновых состояний должно быть положительным: {Q}")
        self.Q = int(Q)
        self._w = w_evaluator
        self._wbar = wbar_evaluator
        self.source: Optional[Dict] = None

    def _checked(self, data) -> DenseTensor:
        tensor = data if isinstance(data, DenseTensor) else DenseTensor(data)
        if tensor.extents != (self.Q, self.Q):
            raise ExtentMismatchError(f"Спиновый вес должен быть {self.Q}×{self.Q}, получено {tensor.extents}")
        return tensor

    def evaluate_w(self, p, q) -> DenseTensor:
        return self._checked(self._evaluate_w(p, q))

    def evaluate_wbar(self, p, q) -> DenseTensor:
        return self._checked(self._evaluate_wbar(p, q))

    def _evaluate_w(self, p, q):
        return self._w(p, q)

    def _evaluate_wbar(self, p, q):
        return self._wbar(p, q)

    @classmethod
    def tabulated(cls, w_data, wbar_data, p=None, q=None) -> "SpinWeightPair":
        w_tensor = w_data if isinstance(w_data, DenseTensor) else DenseTensor(w_data)
        wbar_tensor = wbar_data if isinstance(wbar_data, DenseTensor) else DenseTensor(wbar_data)
        pair = cls(w_tensor.extents[0], lambda _p, _q: w_tensor, lambda _p, _q: wbar_tensor)
        pair.source = {"table": {"p": p, "q": q, "data": w_tensor, "data_barred": wbar_tensor}}
        return pair


def _swap_colors(face_extents: Sequence[int]) -> Tuple[int, ...]:
    a, b, c, d = face_extents
    return (b, a, d, c)


class CheckerboardPair:
    """
    Шахматная пара весов одной формулировки: plain (ω, w, W) и barred (ω̄, w̄, W̄).

    Для IRF-формулировок грани barred-веса получают цвета, противоположные
    граням plain-веса, поэтому их размерности переставлены попарно.
    """

    def __init__(self, plain: WeightFamily, barred: WeightFamily):
        if type(plain).kind != type(barred).kind:
            raise ExtentMismatchError(
                f"Шахматная пара требует одной формулировки: {plain.kind} и {barred.kind}")
        if isinstance(plain, VertexWeightFamily):
            if plain.Q != barred.Q:
                raise ExtentMismatchError(f"Разные Q в шахматной паре: {plain.Q} и {barred.Q}")
        elif isinstance(plain, IrfWeightFamily):
            if barred.face_extents != _swap_colors(plain.face_extents):
                raise ExtentMismatchError(
                    f"Грани шахматной пары не согласованы: {plain.face_extents} и {barred.face_extents}")
        elif isinstance(plain, IrfVertexWeightFamily):
            if plain.Qe != barred.Qe or barred.face_extents != _swap_colors(plain.face_extents):
                raise ExtentMismatchError("Размерности шахматной IRF-вершинной пары не согласованы")
        else:
            raise ExtentMismatchError(f"Неподдерживаемая формулировка шахматной пары: {plain.kind}")
        self.plain = plain
        self.barred = barred

    @property
    def kind(self) -> str:
        return "checkerboard-" + self.plain.kind

    @classmethod
    def uniform(cls, family: WeightFamily) -> "CheckerboardPair":
        """Пара с одинаковыми plain и barred"""
        return cls(family, family)


# ---------------------------------------------------------------------------
# Решение sl(m|n)
# ---------------------------------------------------------------------------

NORM_RULES = ("constant", "inverse-sinh")


@dataclass(frozen=True)
class SlmnParams:
    """
    Параметры решения sl(m|n).

    norm_rule="constant" задает 𝒩 = norm, norm_rule="inverse-sinh" задает
    𝒩 = norm / sinh(p₀ - q₀).
    """

    m: int
    n: int
    eta: complex
    G: Tuple[Tuple[complex, ...], ...]
    norm: complex = 1.0 + 0j
    epsilon: Tuple[int, ...] = ()
    norm_rule: str = "constant"

    @property
    def Q(self) -> int:
        return self.m + self.n

    @classmethod
    def build(cls, m: int, n: int, eta, G=None, norm=1.0, epsilon=None,
              norm_rule: str = "constant") -> "SlmnParams":
        """
        Создает параметры с умолчаниями: G_ρσ = 1, 𝒩 = 1, первые m значений ε равны +1.
        """
        Q = m + n
        if G is None:
            G = np.ones((Q, Q), dtype=np.complex128)
        G_rows = tuple(tuple(parse_complex(v) for v in row) for row in np.asarray(G, dtype=np.complex128).tolist())
        if epsilon is None:
            epsilon = [1] * m + [-1] * n
        return cls(m=int(m), n=int(n), eta=parse_complex(eta), G=G_rows,
                   norm=parse_complex(norm), epsilon=tuple(int(e) for e in epsilon),
                   norm_rule=norm_rule)

    @classmethod
    def unit_at_equal(cls, m: int, n: int, eta, G=None, epsilon=None) -> "SlmnParams":
        """Нормировка 𝒩 = 1/sinh η, при которой Ř(p,p) = 1"""
        eta = parse_complex(eta)
        return cls.build(m, n, eta, G=G, norm=1 / np.sinh(eta), epsilon=epsilon)

    @classmethod
    def classical(cls, hbar, n: int = 2) -> "SlmnParams":
        """
        Классическое семейство: m=0, G_ρσ=-1, 𝒩 = -1/sinh(p₀-q₀), η = ħ.

        При ħ = 0 матрица R равна единичной.
        """
        G = -np.ones((n, n), dtype=np.complex128)
        np.fill_diagonal(G, 1)
        return cls.build(0, n, hbar, G=G, norm=-1.0, norm_rule="inverse-sinh")

    def G_array(self) -> np.ndarray:
        return np.array(self.G, dtype=np.complex128)

    def violations(self) -> List[str]:
        """Список нарушенных инвариантов (пустой для корректных параметров)"""
        problems = []
        if self.m < 0 or self.n < 0 or self.Q < 1:
            problems.append(f"m={self.m}, n={self.n}: требуется m, n >= 0 и m + n >= 1")
            return problems
        if len(self.epsilon) != self.Q:
            problems.append(f"длина epsilon {len(self.epsilon)} не равна Q={self.Q}")
        elif any(e not in (1, -1) for e in self.epsilon):
            problems.append("epsilon должен состоять из ±1")
        else:
            plus = sum(1 for e in self.epsilon if e == 1)
            if plus != self.m:
                problems.append(f"epsilon содержит {plus} значений +1, ожидалось m={self.m}")
        G = self.G_array()
        if G.shape != (self.Q, self.Q):
            problems.append(f"G имеет форму {G.shape}, ожидалось ({self.Q}, {self.Q})")
        else:
            if not np.all(np.isfinite(G)):
                problems.append("G содержит неконечные значения")
            for rho in range(self.Q):
                for sigma in range(rho + 1, self.Q):
                    product = G[rho, sigma] * G[sigma, rho]
                    if abs(product - 1) > 1e-12:
                        problems.append(
                            f"G[{rho + 1},{sigma + 1}]·G[{sigma + 1},{rho + 1}] = {product:.6g}, ожидалось 1")
        if self.norm == 0:
            problems.append("нормировка 𝒩 равна нулю")
        if self.norm_rule not in NORM_RULES:
            problems.append(f"неизвестное правило нормировки '{self.norm_rule}'")
        if not (np.isfinite(self.eta.real) and np.isfinite(self.eta.imag)):
            problems.append("η не является конечным числом")
        return problems


class SlmnVertexFamily(VertexWeightFamily):
    """Вершинные веса sl(m|n) с калибровочными множителями векторных быстрот"""

    def __init__(self, params: SlmnParams):
        super().__init__(params.Q)
        self.params = params
        self.source = {"builtin": {"name": "slmn", "params": params}}
        self._G = params.G_array()
        self._eps = np.array(params.epsilon, dtype=np.float64)

    def bare_weight(self, u: complex, norm: complex) -> np.ndarray:
        """Вес ω₀ при разности быстрот u и нормировке norm, тензор [α][μ][λ][β]"""
        Q = self.Q
        eta = self.params.eta
        w = np.zeros((Q, Q, Q, Q), dtype=np.complex128)
        sinh_u = np.sinh(u)
        sinh_eta = np.sinh(eta)
        for rho in range(Q):
            w[rho, rho, rho, rho] = norm * np.sinh(eta + self._eps[rho] * u)
        for rho in range(Q):
            for sigma in range(Q):
                if rho == sigma:
                    continue
                # цвета остаются на своих линиях
                w[sigma, rho, rho, sigma] = norm * self._G[rho, sigma] * sinh_u
                # цвета меняются линиями
                w[sigma, rho, sigma, rho] = norm * np.exp(u * np.sign(rho - sigma)) * sinh_eta
        return w

    def _evaluate(self, p, q):
        p, q = as_rapidity(p), as_rapidity(q)
        Q = self.Q
        for name, r in (("p", p), ("q", q)):
            if not r.is_vector or r.Q != Q:
                raise RapidityFormError(
                    f"Быстрота {name} должна быть вектором длины {2 * Q + 1}, получено {len(r.components)}")
        u = p.value - q.value
        norm = self.params.norm
        if self.params.norm_rule == "inverse-sinh":
            s = np.sinh(u)
            if abs(s) < POLE_THRESHOLD:
                raise SingularRapidityError("sinh(p₀ - q₀) = 0: нормировка классического семейства не определена")
            norm = norm / s
        states = range(1, Q + 1)
        p_plus = np.array([p.component(s) for s in states])
        p_minus = np.array([p.component(-s) for s in states])
        q_plus = np.array([q.component(s) for s in states])
        q_minus = np.array([q.component(-s) for s in states])
        if np.any(np.abs(q_plus) == 0) or np.any(np.abs(p_minus) == 0):
            raise SingularRapidityError("Нулевая калибровочная компонента в знаменателе")
        # p_{+λ} q_{-β} / (q_{+α} p_{-μ})
        gauge = np.einsum('l,b,a,m->amlb', p_plus, q_minus, 1 / q_plus, 1 / p_minus)
        return self.bare_weight(u, norm) * gauge


def slmn_vertex_weight(params: SlmnParams) -> SlmnVertexFamily:
    """
    Семейство весов sl(m|n).

    Args:
        params: Параметры решения

    Returns:
        SlmnVertexFamily: Семейство, принимающее векторные быстроты длины 2Q+1
    """
    problems = params.violations()
    if problems:
        raise ParameterError("Некорректные параметры sl(m|n): " + "; ".join(problems))
    return SlmnVertexFamily(params)


def decoupled_vertex_weight(Q: int) -> VertexWeightFamily:
    """Постоянный вес δ^λ_α δ^β_μ (распавшаяся вершина)"""
    eye = np.eye(Q, dtype=np.complex128)
    return VertexWeightFamily.tabulated(np.einsum('al,mb->amlb', eye, eye))


def constant_vertex_weight(Q: int, value: complex = 1.0) -> VertexWeightFamily:
    return VertexWeightFamily.tabulated(np.full((Q,) * 4, value, dtype=np.complex128))


def constant_irf_weight(Q: int, value: complex = 1.0) -> IrfWeightFamily:
    return IrfWeightFamily.tabulated(np.full((Q,) * 4, value, dtype=np.complex128))


def all_ones_spin_pair(Q: int) -> SpinWeightPair:
    ones = np.ones((Q, Q), dtype=np.complex128)
    return SpinWeightPair.tabulated(ones, ones)


# ---------------------------------------------------------------------------
# Модель Поттса
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PottsParams:
    """
    Параметры модели Поттса.

    limit=True включает режим N→0: θ = π/2, x(u) = tan u, √N = 0.
    """

    N: float
    c: float = 1.0
    limit: bool = False

    @property
    def theta(self) -> float:
        if self.limit:
            return np.pi / 2
        return float(np.arccos(np.sqrt(self.N) / 2))

    @property
    def sqrt_n(self) -> float:
        return 0.0 if self.limit else float(np.sqrt(self.N))

    def violations(self) -> List[str]:
        problems = []
        if not self.limit:
            if self.N < 0:
                problems.append(f"N={self.N}: число состояний не может быть отрицательным")
            elif self.N == 4:
                problems.append("N=4: θ = 0, параметризация вырождена")
            elif self.N > 4:
                problems.append(f"N={self.N}: тригонометрическая параметризация требует N < 4")
        if not self.c > 0:
            problems.append(f"c={self.c}: масштаб должен быть положительным")
        return problems

    def check(self) -> None:
        problems = self.violations()
        if problems:
            raise ParameterError("Некорректные параметры Поттса: " + "; ".join(problems))


def potts_x(params: PottsParams, u) -> complex:
    """x(u) = sin u / sin(θ - u); в режиме N→0 это tan u"""
    u = complex(u)
    denominator = np.sin(params.theta - u)
    if abs(denominator) < POLE_THRESHOLD:
        raise SingularRapidityError(f"Полюс x(u): sin(θ - u) = 0 при u = {u}")
    return complex(np.sin(u) / denominator)


def potts_xbar(params: PottsParams, u) -> complex:
    """x̄(u) = 1/x(u)"""
    u = complex(u)
    denominator = np.sin(u)
    if abs(denominator) < POLE_THRESHOLD:
        raise SingularRapidityError(f"Полюс x̄(u): sin u = 0 при u = {u}")
    return complex(np.sin(params.theta - u) / denominator)


class PottsSpinPair(SpinWeightPair):
    """Веса Поттса W = 1 + √N x(p-q) δ_{ab}, W̄ = 1 + √N x̄(p-q) δ_{ab}"""

    def __init__(self, params: PottsParams):
        super().__init__(int(params.N))
        self.params = params
        self.source = {"builtin": {"name": "potts", "params": params}}

    def _matrix(self, coefficient: complex) -> np.ndarray:
        Q = self.Q
        return np.ones((Q, Q), dtype=np.complex128) + self.params.sqrt_n * coefficient * np.eye(Q)

    def _evaluate_w(self, p, q):
        return self._matrix(potts_x(self.params, scalar_value(p) - scalar_value(q)))

    def _evaluate_wbar(self, p, q):
        return self._matrix(potts_xbar(self.params, scalar_value(p) - scalar_value(q)))


def potts_spin_weights(params: PottsParams) -> PottsSpinPair:
    """
    Спиновая пара модели Поттса.

    Args:
        params: Параметры; N - положительное целое меньше 4

    Returns:
        PottsSpinPair: Пара весов, принимающая скалярные быстроты
    """
    params.check()
    if params.limit:
        raise ParameterError("Режим N→0 не задает спиновых весов (число состояний равно нулю)")
    if params.N < 1 or float(params.N) != int(params.N):
        raise ParameterError(f"N={params.N}: для спиновых весов нужно положительное целое число состояний")
    return PottsSpinPair(params)


def potts_rapidity_relation_check(params: PottsParams, p, q, r, tol: float = 1e-12) -> ResidualReport:
    """
    Проверяет соотношение x̄(p-q)x(p-r)x̄(q-r) = x̄(p-q) + x(p-r) + x̄(q-r) + √N.

    Args:
        params: Параметры модели (допускается режим N→0)
        p, q, r: Скалярные быстроты
        tol: Допуск относительной невязки

    Returns:
        ResidualReport: Невязка соотношения
    """
    params.check()
    p, q, r = scalar_value(p), scalar_value(q), scalar_value(r)
    xb_pq = potts_xbar(params, p - q)
    x_pr = potts_x(params, p - r)
    xb_qr = potts_xbar(params, q - r)
    lhs = xb_pq * x_pr * xb_qr
    rhs = xb_pq + x_pr + xb_qr + params.sqrt_n
    return residual_report("potts_rapidity_relation", DenseTensor.scalar(lhs), DenseTensor.scalar(rhs), tol)


# ---------------------------------------------------------------------------
# Диагностика
# ---------------------------------------------------------------------------

def _sample_rapidities(family, Q: int):
    p, q = 0.7, 0.3
    if isinstance(family, SlmnVertexFamily):
        return Rapidity.trivial(p, Q), Rapidity.trivial(q, Q)
    return Rapidity.scalar(p), Rapidity.scalar(q)


def _probe(label: str, evaluate: Callable, p, q) -> List[str]:
    try:
        evaluate(p, q)
    except RapidityFormError:
        return []
    except YbxError as e:
        return [f"{label}: {type(e).__name__}: {e}"]
    return []


def validate_weight(target, p=None, q=None) -> List[str]:
    """
    Проверяет параметры или семейство весов, ничего не изменяя.

    Args:
        target: SlmnParams, PottsParams, семейство, спиновая или шахматная пара
        p, q: Быстроты для пробного вычисления (по умолчанию 0.7 и 0.3)

    Returns:
        List[str]: Диагностические сообщения (пустой список для корректных весов)
    """
    if isinstance(target, (SlmnParams, PottsParams)):
        return target.violations()
    diagnostics: List[str] = []
    if isinstance(target, SlmnVertexFamily):
        diagnostics.extend(target.params.violations())
        if diagnostics:
            return diagnostics
    if isinstance(target, PottsSpinPair):
        diagnostics.extend(target.params.violations())
    if isinstance(target, CheckerboardPair):
        diagnostics.extend("plain: " + d for d in validate_weight(target.plain, p, q))
        diagnostics.extend("barred: " + d for d in validate_weight(target.barred, p, q))
        return diagnostics
    Q = target.Q if hasattr(target, 'Q') else max(target.extents)
    sample_p, sample_q = _sample_rapidities(target, Q)
    p = sample_p if p is None else p
    q = sample_q if q is None else q
    if isinstance(target, SpinWeightPair):
        diagnostics.extend(_probe("W", target.evaluate_w, p, q))
        diagnostics.extend(_probe("W̄", target.evaluate_wbar, p, q))
    elif isinstance(target, WeightFamily):
        diagnostics.extend(_probe(target.kind, target.evaluate, p, q))
    else:
        diagnostics.append(f"Неизвестный тип весов: {type(target).__name__}")
    for message in diagnostics:
        logger.debug(f"Диагностика весов: {message}")
    return diagnostics
