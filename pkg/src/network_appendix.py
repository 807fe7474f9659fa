"""
Электрические цепи и звезда–треугольник.

Модуль содержит:
- Преобразования Кеннелли звезда -> треугольник и обратно
- Решение системы Кирхгофа и мощность цепи
- Эквивалентный импеданс между двумя узлами
- Упрощение цепи (висячие узлы, параллельные и последовательные ребра, Y -> Δ)
- Тождество звезда–треугольник гауссовой модели
- Соответствие с моделью Поттса
- Чтение и запись файлов описания цепи (JSON)
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import integrate

from src.errors import (NetlistError, ParameterError, QuadratureError, SingularNetworkError,
                        SingularRapidityError)
from src.reports import ResidualReport, residual_report
from src.tensor_core import format_complex, parse_complex
from src.weight_models import POLE_THRESHOLD

logger = logging.getLogger(__name__)

# Предел числа обусловленности системы Кирхгофа
SINGULAR_CONDITION = 1e14


# ---------------------------------------------------------------------------
# Преобразования Кеннелли
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImpedanceTriple:
    """Три импеданса звезды (Z1, Z2, Z3) или треугольника (Z̄1, Z̄2, Z̄3), Ом"""

    Z1: complex
    Z2: complex
    Z3: complex

    def __post_init__(self):
        for name in ("Z1", "Z2", "Z3"):
            value = parse_complex(getattr(self, name))
            if value == 0:
                raise ParameterError(f"Импеданс {name} равен нулю")
            object.__setattr__(self, name, value)

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return self.Z1, self.Z2, self.Z3


def star_to_triangle(star: ImpedanceTriple) -> ImpedanceTriple:
    """
    Звезда -> треугольник: Z̄ᵢ = (Z1Z2 + Z2Z3 + Z3Z1)/Zᵢ.

    Сторона Z̄ᵢ лежит напротив вершины i.
    """
    z1, z2, z3 = star.as_tuple()
    total = z1 * z2 + z2 * z3 + z3 * z1
    if total == 0:
        raise SingularNetworkError("Сумма попарных произведений импедансов звезды равна нулю")
    return ImpedanceTriple(total / z1, total / z2, total / z3)


def triangle_to_star(triangle: ImpedanceTriple) -> ImpedanceTriple:
    """Треугольник -> звезда: Zᵢ = Z̄ⱼZ̄ₖ/(Z̄1 + Z̄2 + Z̄3)"""
    a, b, c = triangle.as_tuple()
    total = a + b + c
    if total == 0:
        raise SingularNetworkError("Сумма импедансов треугольника равна нулю")
    return ImpedanceTriple(b * c / total, a * c / total, a * b / total)


def triangle_from_legs(legs: Sequence[complex]) -> Tuple[complex, complex, complex]:
    """
    Стороны треугольника по лучам звезды R_{j,0}.

    R_{j,j+1} = R_{j,0}·R_{j+1,0}·Σ_k 1/R_{k,0}.

    Returns:
        Tuple: (R12, R23, R31); R12 = Z̄3, R23 = Z̄1, R31 = Z̄2
    """
    r1, r2, r3 = (parse_complex(x) for x in legs)
    if 0 in (r1, r2, r3):
        raise ParameterError("Луч звезды имеет нулевое сопротивление")
    conductance = 1 / r1 + 1 / r2 + 1 / r3
    return r1 * r2 * conductance, r2 * r3 * conductance, r3 * r1 * conductance


# ---------------------------------------------------------------------------
# Цепь
# ---------------------------------------------------------------------------

class ResistorNetwork:
    """
    Связный граф с комплексными импедансами ребер.

    Узлы - строки. terminals - выделенные узлы, которые упрощение не удаляет.
    potentials - заданные граничные потенциалы (В); остальные узлы внутренние.
    """

    def __init__(self, nodes: Iterable, edges: Iterable[Tuple], terminals: Iterable = (),
                 potentials: Optional[Dict] = None):
        graph = nx.MultiGraph()
        graph.add_nodes_from(str(n) for n in nodes)
        for a, b, z in edges:
            a, b = str(a), str(b)
            if a not in graph or b not in graph:
                raise NetlistError(f"Ребро ({a}, {b}) ссылается на неизвестный узел")
            if a == b:
                raise NetlistError(f"Петля в узле {a} не допускается")
            z = parse_complex(z)
            if z == 0:
                raise NetlistError(f"Ребро ({a}, {b}) имеет нулевой импеданс")
            graph.add_edge(a, b, z=z)
        if graph.number_of_nodes() == 0:
            raise NetlistError("Цепь не содержит узлов")
        if not nx.is_connected(graph):
            raise NetlistError("Цепь должна быть связной")
        self.graph = graph
        self.terminals = tuple(str(t) for t in terminals)
        missing = [t for t in self.terminals if t not in graph]
        if missing:
            raise NetlistError(f"Выводы {missing} не являются узлами цепи")
        self.potentials = {str(k): parse_complex(v) for k, v in (potentials or {}).items()}
        missing = [n for n in self.potentials if n not in graph]
        if missing:
            raise NetlistError(f"Потенциалы заданы для неизвестных узлов {missing}")

    @classmethod
    def from_graph(cls, graph: nx.MultiGraph, terminals=(), potentials=None) -> "ResistorNetwork":
        edges = [(a, b, data["z"]) for a, b, data in graph.edges(data=True)]
        return cls(graph.nodes, edges, terminals, potentials)

    @property
    def nodes(self) -> List[str]:
        return sorted(self.graph.nodes)

    def edges(self) -> List[Tuple[str, str, complex]]:
        """Ребра в детерминированном порядке"""
        result = []
        for a, b, data in self.graph.edges(data=True):
            a, b = min(a, b), max(a, b)
            result.append((a, b, data["z"]))
        return sorted(result, key=lambda e: (e[0], e[1], e[2].real, e[2].imag))

    def internal_nodes(self) -> List[str]:
        return [n for n in self.nodes if n not in self.potentials]

    def copy(self) -> "ResistorNetwork":
        return ResistorNetwork.from_graph(self.graph, self.terminals, self.potentials)

    def laplacian(self, order: Sequence[str]) -> np.ndarray:
        """Матрица проводимостей (лапласиан с весами 1/Z) в заданном порядке узлов"""
        index = {n: i for i, n in enumerate(order)}
        L = np.zeros((len(order), len(order)), dtype=np.complex128)
        for a, b, z in self.edges():
            i, j = index[a], index[b]
            y = 1 / z
            L[i, i] += y
            L[j, j] += y
            L[i, j] -= y
            L[j, i] -= y
        return L

    def __repr__(self) -> str:
        return (f"ResistorNetwork(nodes={self.graph.number_of_nodes()}, "
                f"edges={self.graph.number_of_edges()}, terminals={list(self.terminals)})")


def _solve_dirichlet(net: ResistorNetwork, fixed: Dict[str, complex]) -> Dict[str, complex]:
    order = net.nodes
    internal = [n for n in order if n not in fixed]
    boundary = [n for n in order if n in fixed]
    potentials = dict(fixed)
    if not internal:
        return potentials
    L = net.laplacian(internal + boundary)
    k = len(internal)
    L_ii, L_ib = L[:k, :k], L[:k, k:]
    phi_b = np.array([fixed[n] for n in boundary], dtype=np.complex128)
    try:
        condition = np.linalg.cond(L_ii)
        if not np.isfinite(condition) or condition > SINGULAR_CONDITION:
            raise SingularNetworkError(f"Система Кирхгофа вырождена: cond = {condition:.3e}")
        phi_i = np.linalg.solve(L_ii, -L_ib @ phi_b)
    except np.linalg.LinAlgError as e:
        raise SingularNetworkError(f"Система Кирхгофа вырождена: {e}") from e
    potentials.update(zip(internal, (complex(v) for v in phi_i)))
    return potentials


@dataclass
class KirchhoffSolution:
    """Потенциалы узлов, токи ребер (от a к b), мощность и наибольший дисбаланс токов"""

    potentials: Dict[str, complex]
    currents: List[Tuple[str, str, complex]]
    power: complex
    max_imbalance: float

    def to_dict(self) -> Dict:
        return {
            "potentials": {n: format_complex(v) for n, v in sorted(self.potentials.items())},
            "currents": [{"a": a, "b": b, "i": format_complex(i)} for a, b, i in self.currents],
            "power": format_complex(self.power),
            "max_imbalance": self.max_imbalance,
        }


def kirchhoff_power(net: ResistorNetwork, potentials: Dict[str, complex]) -> complex:
    """P = Σ (φ_a - φ_b)²/Z_ab по всем ребрам"""
    return complex(sum((potentials[a] - potentials[b]) ** 2 / z for a, b, z in net.edges()))


def solve_kirchhoff(net: ResistorNetwork) -> KirchhoffSolution:
    """
    Решает систему Кирхгофа при заданных граничных потенциалах.

    Args:
        net: Цепь с потенциалами хотя бы одного узла

    Returns:
        KirchhoffSolution: Потенциалы, токи и мощность
    """
    if not net.potentials:
        raise ParameterError("Не задан ни один граничный потенциал")
    potentials = _solve_dirichlet(net, net.potentials)
    currents = [(a, b, (potentials[a] - potentials[b]) / z) for a, b, z in net.edges()]
    balance = {n: 0j for n in net.nodes}
    for a, b, current in currents:
        balance[a] += current
        balance[b] -= current
    internal = net.internal_nodes()
    imbalance = max((abs(balance[n]) for n in internal), default=0.0)
    return KirchhoffSolution(potentials, currents, kirchhoff_power(net, potentials), float(imbalance))


def perturbed_power_increase(net: ResistorNetwork, solution: KirchhoffSolution,
                             delta: float = 1e-3) -> Dict[str, float]:
    """
    Наименьший рост Re P при сдвиге каждого внутреннего потенциала на ±delta.

    Для цепей с положительными сопротивлениями все значения положительны:
    решение Кирхгофа минимизирует мощность.
    """
    base = kirchhoff_power(net, solution.potentials).real
    increases = {}
    for node in net.internal_nodes():
        changes = []
        for sign in (1, -1):
            shifted = dict(solution.potentials)
            shifted[node] += sign * delta
            changes.append(kirchhoff_power(net, shifted).real - base)
        increases[node] = min(changes)
    return increases


def equivalent_impedance(net: ResistorNetwork, a: str, b: str) -> complex:
    """
    Эквивалентный импеданс между узлами a и b.

    На a подается потенциал 1 В, на b - 0 В, остальные узлы внутренние;
    результат равен V/I для тока, вытекающего из a.
    """
    a, b = str(a), str(b)
    if a == b:
        raise ParameterError("Узлы эквивалентного импеданса должны различаться")
    for node in (a, b):
        if node not in net.graph:
            raise ParameterError(f"Узел {node} отсутствует в цепи")
    potentials = _solve_dirichlet(net, {a: 1 + 0j, b: 0j})
    current = 0j
    for _, neighbor, data in net.graph.edges(a, data=True):
        current += (potentials[a] - potentials[neighbor]) / data["z"]
    if current == 0:
        raise SingularNetworkError(f"Ток между {a} и {b} равен нулю")
    return complex(1 / current)


# ---------------------------------------------------------------------------
# Упрощение цепи
# ---------------------------------------------------------------------------

def _protected(net: ResistorNetwork) -> set:
    return set(net.terminals) | set(net.potentials)


def _prune(graph: nx.MultiGraph, protected: set) -> bool:
    for node in sorted(graph.nodes):
        if node not in protected and graph.degree(node) <= 1 and graph.number_of_nodes() > 1:
            graph.remove_node(node)
            return True
    return False


def _merge_parallel(graph: nx.MultiGraph, protected: set) -> bool:
    for a, b in sorted({tuple(sorted((u, v))) for u, v in graph.edges()}):
        if graph.number_of_edges(a, b) > 1:
            admittance = sum(1 / data["z"] for data in graph.get_edge_data(a, b).values())
            if admittance == 0:
                raise SingularNetworkError(f"Параллельные ребра ({a}, {b}) дают нулевую проводимость")
            graph.remove_edges_from([(a, b)] * graph.number_of_edges(a, b))
            graph.add_edge(a, b, z=complex(1 / admittance))
            return True
    return False


def _merge_series(graph: nx.MultiGraph, protected: set) -> bool:
    for node in sorted(graph.nodes):
        if node in protected or graph.degree(node) != 2:
            continue
        edges = list(graph.edges(node, data=True))
        (_, left, d1), (_, right, d2) = edges
        if left == right:
            continue
        total = d1["z"] + d2["z"]
        if total == 0:
            raise SingularNetworkError(f"Последовательные ребра через {node} дают нулевой импеданс")
        graph.remove_node(node)
        graph.add_edge(left, right, z=complex(total))
        return True
    return False


def _wye_to_delta(graph: nx.MultiGraph, protected: set) -> bool:
    for node in sorted(graph.nodes):
        if node in protected or graph.degree(node) != 3:
            continue
        edges = sorted(((nbr, data["z"]) for _, nbr, data in graph.edges(node, data=True)), key=lambda e: e[0])
        neighbors = [nbr for nbr, _ in edges]
        if len(set(neighbors)) != 3:
            continue
        (n1, z1), (n2, z2), (n3, z3) = edges
        triangle = star_to_triangle(ImpedanceTriple(z1, z2, z3))
        graph.remove_node(node)
        # сторона Z̄ᵢ лежит напротив луча i
        graph.add_edge(n2, n3, z=triangle.Z1)
        graph.add_edge(n1, n3, z=triangle.Z2)
        graph.add_edge(n1, n2, z=triangle.Z3)
        return True
    return False


REDUCTION_RULES = (_prune, _merge_parallel, _merge_series, _wye_to_delta)


def reduce_network(net: ResistorNetwork) -> ResistorNetwork:
    """
    Упрощает цепь до неподвижной точки, не трогая выводы и граничные узлы.

    Правила применяются по одному в порядке: висячий узел, параллельные ребра,
    последовательные ребра, Y -> Δ. Узлы перебираются в порядке имен.

    Args:
        net: Исходная цепь

    Returns:
        ResistorNetwork: Упрощенная цепь
    """
    graph = net.graph.copy()
    protected = _protected(net)
    steps = 0
    while any(rule(graph, protected) for rule in REDUCTION_RULES):
        steps += 1
    logger.debug(f"Упрощение цепи: {steps} шагов, осталось {graph.number_of_nodes()} узлов")
    return ResistorNetwork.from_graph(graph, net.terminals, net.potentials)


# ---------------------------------------------------------------------------
# Гауссова модель
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianStar:
    """Звезда гауссовой модели: β > 0, лучи R_{j,0} > 0, потенциалы φ_j"""

    beta: float
    legs: Tuple[float, float, float]
    phis: Tuple[float, float, float]

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError(f"β должно быть положительным, получено {self.beta}")
        if len(self.legs) != 3 or len(self.phis) != 3:
            raise ParameterError("Звезда имеет ровно три луча")
        if any(not r > 0 for r in self.legs):
            raise ParameterError(f"Сопротивления лучей должны быть положительными: {self.legs}")
        object.__setattr__(self, 'legs', tuple(float(r) for r in self.legs))
        object.__setattr__(self, 'phis', tuple(float(x) for x in self.phis))


def gaussian_star_integrand(g: GaussianStar, phi0: float) -> float:
    """√(β/π)·exp(-β Σ (φ_j - φ₀)²/R_{j,0})"""
    exponent = sum((phi - phi0) ** 2 / r for phi, r in zip(g.phis, g.legs))
    return float(np.sqrt(g.beta / np.pi) * np.exp(-g.beta * exponent))


def gaussian_star_closed_form(g: GaussianStar) -> float:
    """Интеграл по φ₀ после выделения полного квадрата: A^{-1/2}·exp(-β(C - B²/A))"""
    legs, phis = np.array(g.legs), np.array(g.phis)
    A = np.sum(1 / legs)
    B = np.sum(phis / legs)
    C = np.sum(phis ** 2 / legs)
    return float(A ** -0.5 * np.exp(-g.beta * (C - B * B / A)))


def gaussian_triangle_side(g: GaussianStar) -> Tuple[float, float]:
    """Правая часть: префактор Π R_{j,0}^{1/3}/R_{j,j+1}^{1/6} и произведение экспонент треугольника"""
    sides = [s.real for s in triangle_from_legs(g.legs)]
    prefactor = float(np.prod(np.array(g.legs) ** (1 / 3)) / np.prod(np.array(sides) ** (1 / 6)))
    phis = g.phis
    exponent = sum((phis[j] - phis[(j + 1) % 3]) ** 2 / sides[j] for j in range(3))
    return prefactor, float(prefactor * np.exp(-g.beta * exponent))


def gaussian_star_triangle_check(g: GaussianStar, tol: float = 1e-12,
                                 quadrature_tol: float = 1e-8) -> Tuple[ResidualReport, ResidualReport]:
    """
    Проверяет тождество звезда–треугольник гауссовой модели.

    Левая часть - нормированный интеграл по потенциалу центра звезды,
    правая - префактор, умноженный на веса сторон треугольника.

    Args:
        g: Параметры звезды
        tol: Допуск сравнения замкнутой формы с правой частью
        quadrature_tol: Допуск сравнения квадратуры с правой частью

    Returns:
        Tuple[ResidualReport, ResidualReport]: Замкнутая форма и квадратура
    """
    legs, phis = np.array(g.legs), np.array(g.phis)
    A = float(np.sum(1 / legs))
    center = float(np.sum(phis / legs)) / A
    half_width = 40.0 / np.sqrt(g.beta * A)
    result = integrate.quad(lambda x: gaussian_star_integrand(g, x), center - half_width, center + half_width,
                            epsabs=1e-10, limit=200, full_output=1)
    if len(result) > 3:
        raise QuadratureError(f"Квадратура не сошлась: {result[3]}")
    quadrature, error = result[0], result[1]
    if error > quadrature_tol:
        raise QuadratureError(f"Оценка ошибки квадратуры {error:.3e} превышает {quadrature_tol:.1e}")
    closed = gaussian_star_closed_form(g)
    prefactor, rhs = gaussian_triangle_side(g)
    details = {"prefactor": prefactor, "lhs_closed_form": closed, "lhs_quadrature": quadrature, "rhs": rhs,
               "triangle": [s.real for s in triangle_from_legs(g.legs)]}
    closed_report = residual_report("gaussian_star_triangle", np.array([closed]), np.array([rhs]), tol,
                                    details=details)
    quadrature_report = residual_report("gaussian_star_triangle_quadrature", np.array([quadrature]),
                                        np.array([rhs]), quadrature_tol, details={"abserr": error})
    return closed_report, quadrature_report


def gaussian_partition_function(net: ResistorNetwork, beta: float) -> Tuple[float, float]:
    """
    Гауссова статистическая сумма цепи с заданными граничными потенциалами.

    Z = det(L_int)^{-1/2}·exp(-β·P_min), где L_int - блок лапласиана
    внутренних узлов, а P_min - мощность решения Кирхгофа.

    Returns:
        Tuple[float, float]: (Z, P_min)
    """
    if not beta > 0:
        raise ParameterError(f"β должно быть положительным, получено {beta}")
    for a, b, z in net.edges():
        if z.imag != 0 or not z.real > 0:
            raise ParameterError(f"Гауссова модель требует положительных сопротивлений, ребро ({a}, {b}): {z}")
    solution = solve_kirchhoff(net)
    internal = net.internal_nodes()
    power = solution.power.real
    if not internal:
        return float(np.exp(-beta * power)), power
    order = internal + [n for n in net.nodes if n not in internal]
    L_int = net.laplacian(order)[:len(internal), :len(internal)].real
    sign, logdet = np.linalg.slogdet(L_int)
    if sign <= 0:
        raise SingularNetworkError("Блок внутренних узлов лапласиана не положительно определен")
    return float(np.exp(-0.5 * logdet - beta * power)), power


# ---------------------------------------------------------------------------
# Соответствие с моделью Поттса
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PottsCoupling:
    """x = (e^{βJ} - 1)/√N, x̄ = 1/x и дуальная константа связи J̄"""

    x: float
    xbar: float
    Jbar: float


def potts_coupling_map(N: float, J: float, beta: float, limit: bool = False) -> PottsCoupling:
    """
    Переменные Поттса для константы связи J.

    В режиме N -> 0 с β = √N выполняется x = J и J̄ = x̄ = 1/J.

    Args:
        N: Число состояний (N > 0; в режиме limit игнорируется)
        J: Константа связи
        beta: Обратная температура (в режиме limit игнорируется)
        limit: Режим N -> 0

    Returns:
        PottsCoupling: x, x̄, J̄
    """
    if limit:
        x = float(J)
        if x == 0:
            raise ParameterError("x = 0: дуальная константа связи не определена")
        return PottsCoupling(x, 1 / x, 1 / x)
    if not N > 0 or not beta > 0:
        raise ParameterError(f"Требуется N > 0 и β > 0, получено N={N}, β={beta}")
    root = np.sqrt(N)
    x = float(np.expm1(beta * J) / root)
    if x == 0:
        raise ParameterError("x = 0: дуальная константа связи не определена")
    xbar = 1 / x
    argument = 1 + root * xbar
    if not argument > 0:
        raise ParameterError(f"1 + √N·x̄ = {argument:.6g}: дуальная константа связи не вещественна")
    return PottsCoupling(x, xbar, float(np.log(argument) / beta))


def limit_coupling(c: float, resistance: float) -> float:
    """J = c/R в режиме N -> 0"""
    if not c > 0 or resistance == 0:
        raise ParameterError(f"Требуется c > 0 и R != 0, получено c={c}, R={resistance}")
    return c / resistance


def _tan(u: float) -> float:
    if abs(np.cos(u)) < POLE_THRESHOLD:
        raise SingularRapidityError(f"Полюс tan при u = {u}")
    return float(np.tan(u))


def _cot(u: float) -> float:
    if abs(np.sin(u)) < POLE_THRESHOLD:
        raise SingularRapidityError(f"Полюс cot при u = {u}")
    return float(np.cos(u) / np.sin(u))


def potts_limit_impedances(c: float, p: float, q: float, r: float) -> Tuple[ImpedanceTriple, ImpedanceTriple]:
    """
    Импедансы звезды и треугольника в режиме N -> 0.

    Z = c·(tan(p-q), cot(p-r), tan(q-r)), Z̄ = c·(cot(p-q), tan(p-r), cot(q-r)).
    """
    star = ImpedanceTriple(c * _tan(p - q), c * _cot(p - r), c * _tan(q - r))
    triangle = ImpedanceTriple(c * _cot(p - q), c * _tan(p - r), c * _cot(q - r))
    return star, triangle


def potts_limit_star_triangle_check(c: float, p: float, q: float, r: float,
                                    tol: float = 1e-12) -> ResidualReport:
    """
    Проверяет, что параметризация режима N -> 0 решает звезду–треугольник.

    Сравниваются с c² все пять величин: ZᵢZ̄ᵢ (три), Z1Z2 + Z2Z3 + Z3Z1
    и Z̄1Z̄2Z̄3/(Z̄1 + Z̄2 + Z̄3).
    """
    if not c > 0:
        raise ParameterError(f"c должно быть положительным, получено {c}")
    star, triangle = potts_limit_impedances(c, p, q, r)
    z, zb = star.as_tuple(), triangle.as_tuple()
    total = sum(zb)
    if total == 0:
        raise SingularNetworkError("Сумма импедансов треугольника равна нулю")
    values = np.array([z[0] * zb[0], z[1] * zb[1], z[2] * zb[2],
                       z[0] * z[1] + z[1] * z[2] + z[2] * z[0],
                       zb[0] * zb[1] * zb[2] / total])
    return residual_report("potts_limit_star_triangle", values, np.full(5, c * c), tol,
                           details={"Z": list(z), "Zbar": list(zb)})


# ---------------------------------------------------------------------------
# Файлы описания цепи
# ---------------------------------------------------------------------------

def netlist_to_dict(net: ResistorNetwork) -> Dict:
    return {
        "nodes": net.nodes,
        "edges": [{"a": a, "b": b, "z": format_complex(z)} for a, b, z in net.edges()],
        "terminals": list(net.terminals),
        "potentials": {n: format_complex(v) for n, v in sorted(net.potentials.items())},
    }


def netlist_from_dict(data: Dict) -> ResistorNetwork:
    """Создает цепь из словаря формата файла описания цепи"""
    if not isinstance(data, dict):
        raise NetlistError("Описание цепи должно быть JSON-объектом")
    try:
        nodes = data["nodes"]
        edges = [(e["a"], e["b"], e["z"]) for e in data["edges"]]
    except (KeyError, TypeError) as e:
        raise NetlistError(f"В описании цепи отсутствует поле {e}") from e
    try:
        return ResistorNetwork(nodes, edges, data.get("terminals", []), data.get("potentials") or {})
    except ValueError as e:
        if isinstance(e, NetlistError):
            raise
        raise NetlistError(f"Некорректное описание цепи: {e}") from e


def load_netlist(path: str) -> ResistorNetwork:
    """Читает цепь из JSON-файла"""
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise NetlistError(f"Файл {path} не является корректным JSON: {e}") from e
    return netlist_from_dict(data)


def save_netlist(net: ResistorNetwork, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(netlist_to_dict(net), f, ensure_ascii=False, indent=2)
