"""
Уравнение отражения для левой границы.

K(q)·Ř(μ-p-q)·K(p)·Ř(q-p) = Ř(q-p)·K(p)·Ř(μ-p-q)·K(q),

где K действует на узел 1, а Ř - матрица разностного типа на узлах 1, 2.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.errors import ExtentMismatchError, ParameterError, ReflectionFitError
from src.operator_algebra import FamilyOfOperators, OperatorMatrix, embed_one_site
from src.reports import ResidualReport, residual_report

logger = logging.getLogger(__name__)

# Значение k в опорной точке сетки
DEFAULT_K_REFERENCE = 2.0


def _sides(rcheck: FamilyOfOperators, k_left: np.ndarray, k_right: np.ndarray, mu, p, q):
    s = complex(mu) - complex(p) - complex(q)
    d = complex(q) - complex(p)
    r_s, r_d = rcheck(s).array, rcheck(d).array
    return k_left @ r_s @ k_right @ r_d, r_d @ k_right @ r_s @ k_left


def _k_embedded(k_family: FamilyOfOperators, value, sites: int) -> np.ndarray:
    k = k_family(value)
    local = k.array
    if k.sites != 1:
        raise ExtentMismatchError(f"K должен быть одноузельным оператором, получено {k.sites} узлов")
    return embed_one_site(local, 1, sites)


def verify_reflection(rcheck: FamilyOfOperators, k_family: FamilyOfOperators, mu, p, q,
                      tol: float = 1e-9) -> ResidualReport:
    """
    Невязка уравнения отражения при быстротах p, q и параметре μ.

    Args:
        rcheck: Семейство Ř(u) на двух узлах
        k_family: Семейство K(p) на одном узле
        mu: Параметр отражения (p̄ = μ - p)
        p, q: Быстроты
        tol: Допуск относительной невязки

    Returns:
        ResidualReport: Отчет "reflection"
    """
    probe = rcheck(0.0)
    k_p = _k_embedded(k_family, p, probe.sites)
    k_q = _k_embedded(k_family, q, probe.sites)
    if k_p.shape != probe.array.shape:
        raise ExtentMismatchError(f"Размерности K {k_p.shape} и Ř {probe.array.shape} не согласованы")
    lhs, rhs = _sides(rcheck, k_q, k_p, mu, p, q)
    return residual_report("reflection", lhs, rhs, tol, details={"mu": complex(mu)})


def diagonal_k(k: complex) -> OperatorMatrix:
    """K = diag(1, k)"""
    return OperatorMatrix.from_array(np.diag([1.0, complex(k)]), 1, 2, "K")


@dataclass
class DiagonalKSolution:
    """Табулированное диагональное решение K(p) = diag(1, k(p)) на сетке"""

    mu: complex
    grid: List[float]
    k: List[complex]
    residuals: List[float]
    family: FamilyOfOperators = field(repr=False)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"p": self.grid, "k": self.k, "residual": self.residuals})


def _solve_point(rcheck: FamilyOfOperators, mu, p_ref, k_ref: complex, q, tol: float):
    k_ref_matrix = embed_one_site(diagonal_k(k_ref).array, 1, 2)
    e0 = embed_one_site(np.diag([1.0, 0.0]), 1, 2)
    e1 = embed_one_site(np.diag([0.0, 1.0]), 1, 2)
    s = complex(mu) - complex(p_ref) - complex(q)
    d = complex(q) - complex(p_ref)
    r_s, r_d = rcheck(s).array, rcheck(d).array
    m1 = r_s @ k_ref_matrix @ r_d
    m2 = r_d @ k_ref_matrix @ r_s
    # k·(E1·M1 - M2·E1) = M2·E0 - E0·M1
    a = (e1 @ m1 - m2 @ e1).reshape(-1, 1)
    b = (m2 @ e0 - e0 @ m1).reshape(-1)
    free = bool(np.max(np.abs(a)) <= 1e-14 * max(1.0, np.max(np.abs(m1))))
    if free:
        k = 1 + 0j
    else:
        solution, *_ = np.linalg.lstsq(a, b, rcond=None)
        k = complex(solution[0])
    lhs = (e0 + k * e1) @ m1
    rhs = m2 @ (e0 + k * e1)
    report = residual_report("reflection", lhs, rhs, tol)
    return k, report.relative, free


def solve_diagonal_k(rcheck: FamilyOfOperators, mu, grid: Sequence[float], tol: float = 1e-8,
                     k_ref: complex = DEFAULT_K_REFERENCE,
                     run_ordered: Optional[Callable[[List[Callable]], List]] = None) -> DiagonalKSolution:
    """
    Решает уравнение отражения в диагональном анзаце K(p) = diag(1, k(p)), Q = 2.

    В первой точке сетки k = k_ref. В каждой следующей точке q значение k(q)
    находится методом наименьших квадратов из уравнения для пары (p_ref, q).
    Если уравнение не зависит от k, принимается k = 1; если так во всех
    точках, k = 1 и в опорной точке.

    Args:
        rcheck: Семейство Ř(u) на двух узлах с Q = 2
        mu: Параметр отражения
        grid: Точки сетки, первая - опорная
        tol: Допуск невязки в каждой точке
        k_ref: Значение k в опорной точке
        run_ordered: Исполнитель списка задач с сохранением порядка (например, TaskQueue.run_ordered)

    Returns:
        DiagonalKSolution: Значения k, невязки и семейство K
    """
    grid = [float(x) for x in grid]
    if not grid:
        raise ParameterError("Сетка решения K пуста")
    probe = rcheck(0.0)
    if probe.local_dim != 2 or probe.sites != 2:
        raise ExtentMismatchError(f"Диагональный анзац требует Ř на двух узлах с Q=2, получено "
                                  f"{probe.sites} узлов, Q={probe.local_dim}")
    p_ref = grid[0]
    tasks = [lambda q=q: _solve_point(rcheck, mu, p_ref, k_ref, q, tol) for q in grid[1:]]
    results = run_ordered(tasks) if run_ordered is not None else [task() for task in tasks]
    # уравнение не зависит от k ни в одной точке: K тождественна
    if results and all(free for _, _, free in results):
        k_ref = 1 + 0j
    ks = [complex(k_ref)] + [k for k, _, _ in results]
    residuals = [0.0] + [res for _, res, _ in results]
    worst = max(residuals)
    if worst > tol:
        raise ReflectionFitError(f"Диагональный анзац K не решает уравнение отражения: невязка {worst:.3e}")
    table: Dict[float, complex] = dict(zip(grid, ks))

    def evaluate(p) -> OperatorMatrix:
        key = float(np.real(p))
        if key not in table:
            raise ParameterError(f"Точка {p} не принадлежит сетке решения K")
        return diagonal_k(table[key])

    logger.debug(f"Диагональное K найдено на {len(grid)} точках, наибольшая невязка {worst:.3e}")
    return DiagonalKSolution(complex(mu), grid, ks, residuals, FamilyOfOperators(evaluate, "K"))
