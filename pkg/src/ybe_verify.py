"""
Численная проверка уравнений звезда–треугольник и Янга–Бакстера.

Все проверки строят обе части уравнения как плотные тензоры свободных
индексов и сравнивают их. Для уравнений со скалярными множителями R, R̄
множитель оценивается по элементу правой части с максимальным модулем.

Соглашения о свертках (буквы - индексы тензоров):
- вершинный вес [α][μ][λ][β], аргументы (p,q), (q,r), (p,r);
- IRF-вес [a][b][c][d] (нижняя левая, нижняя правая, верхняя правая,
  верхняя левая грани);
- смешанный вес [α][μ][λ][β][a][b][c][d].
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.errors import ExtentMismatchError, ProportionalityError
from src.reports import ResidualReport, residual_report
from src.tensor_core import DenseTensor, as_array, einsum_network, max_abs_diff
from src.weight_models import (CheckerboardPair, IrfVertexWeightFamily, IrfWeightFamily, Rapidity,
                               SpinWeightPair, VertexWeightFamily)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9

# Вершинное уравнение: свободные α,β,γ,α′,β′,γ′ -> a,b,c,x,y,z
VERTEX_LHS = 'bade,dfzx,ecfy->abcxyz'
VERTEX_RHS = 'edxy,acfd,bfze->abcxyz'

# IRF-уравнение: шесть свободных граней A,B,C,P,S,T
IRF_LHS = 'CSDP,DTBP,SATD->ABCPST'
IRF_RHS = 'EATB,SAEC,CEBP->ABCPST'

# Смешанное уравнение: произведение вершинной и IRF-структур
IRF_VERTEX_LHS = 'badeCSDP,dfzxDTBP,ecfySATD->abcxyzABCPST'
IRF_VERTEX_RHS = 'edxyEATB,acfdSAEC,bfzeCEBP->abcxyzABCPST'

# Спиновые уравнения звезда–треугольник
STAR_SUM = 'cd,db,da->abc'
STAR_PRODUCT = 'ba,ca,cb->abc'
DUAL_STAR_SUM = 'dc,bd,ad->abc'
DUAL_STAR_PRODUCT = 'ab,ac,bc->abc'

_CONTRACTIONS = {
    VertexWeightFamily: (VERTEX_LHS, VERTEX_RHS),
    IrfWeightFamily: (IRF_LHS, IRF_RHS),
    IrfVertexWeightFamily: (IRF_VERTEX_LHS, IRF_VERTEX_RHS),
}


def estimate_scalar_factor(lhs, rhs) -> Tuple[complex, float]:
    """
    Оценивает скаляр s в соотношении lhs = s·rhs.

    Args:
        lhs: Левая часть
        rhs: Правая часть тех же размерностей

    Returns:
        Tuple[complex, float]: Скаляр и невязка max|lhs - s·rhs|
    """
    left, right = as_array(lhs), as_array(rhs)
    if left.shape != right.shape:
        raise ExtentMismatchError(f"Разные размерности частей: {left.shape} и {right.shape}")
    magnitudes = np.abs(right)
    pivot = np.unravel_index(int(np.argmax(magnitudes)), right.shape) if right.ndim else ()
    if magnitudes[pivot] == 0:
        if np.max(np.abs(left)) == 0:
            return 1 + 0j, 0.0
        raise ProportionalityError("Правая часть тождественно равна нулю, а левая нет")
    scalar = complex(left[pivot] / right[pivot])
    return scalar, max_abs_diff(left, scalar * right)


def _proportional_report(equation: str, lhs: DenseTensor, rhs: DenseTensor, tol: float,
                         scalar_slot: str = "R") -> ResidualReport:
    scalar, _ = estimate_scalar_factor(lhs, rhs)
    kwargs = {"scalar_R": scalar} if scalar_slot == "R" else {"scalar_Rbar": scalar}
    return residual_report(equation, lhs, as_array(rhs) * scalar, tol, **kwargs)


def _family_sides(family, p, q, r, spec_pair) -> Tuple[DenseTensor, DenseTensor]:
    lhs_spec, rhs_spec = spec_pair
    w_pq, w_qr, w_pr = family.evaluate(p, q), family.evaluate(q, r), family.evaluate(p, r)
    return einsum_network(lhs_spec, w_pq, w_qr, w_pr), einsum_network(rhs_spec, w_pq, w_qr, w_pr)


def verify_vertex_ybe(omega: VertexWeightFamily, p, q, r, tol: float = DEFAULT_TOLERANCE) -> ResidualReport:
    """
    Проверяет вершинное уравнение Янга–Бакстера (скалярный множитель равен 1).

    Args:
        omega: Вершинное семейство
        p, q, r: Быстроты трех линий
        tol: Допуск относительной невязки

    Returns:
        ResidualReport: Невязка тензоров ранга 6
    """
    lhs, rhs = _family_sides(omega, p, q, r, (VERTEX_LHS, VERTEX_RHS))
    report = residual_report("vertex_ybe", lhs, rhs, tol)
    logger.debug(f"vertex_ybe: невязка {report.relative:.3e}")
    return report


def verify_irf_ybe(w: IrfWeightFamily, p, q, r, tol: float = DEFAULT_TOLERANCE) -> ResidualReport:
    """Проверяет IRF-уравнение Янга–Бакстера (скалярный множитель равен 1)"""
    lhs, rhs = _family_sides(w, p, q, r, (IRF_LHS, IRF_RHS))
    return residual_report("irf_ybe", lhs, rhs, tol)


def verify_irf_vertex_ybe(W: IrfVertexWeightFamily, p, q, r, tol: float = DEFAULT_TOLERANCE) -> ResidualReport:
    """Проверяет общее IRF-вершинное уравнение для одного семейства"""
    lhs, rhs = _family_sides(W, p, q, r, (IRF_VERTEX_LHS, IRF_VERTEX_RHS))
    return residual_report("irf_vertex_ybe", lhs, rhs, tol)


def verify_spin_star_triangle(pair: SpinWeightPair, p, q, r, tol: float = DEFAULT_TOLERANCE,
                              transposed: bool = False) -> Tuple[ResidualReport, ResidualReport]:
    """
    Проверяет пару спиновых уравнений звезда–треугольник.

    Первое уравнение: сумма по d от W̄_cd(p,q) W̄_db(q,r) W_da(p,r) равна
    R·W_ba(p,q) W_ca(q,r) W̄_cb(p,r). Второе получается перестановкой спинов
    в каждом весе и несет множитель R̄.

    Args:
        pair: Спиновая пара весов
        p, q, r: Скалярные быстроты
        tol: Допуск относительной невязки
        transposed: Транспонировать оба спиновых аргумента W и W̄

    Returns:
        Tuple[ResidualReport, ResidualReport]: Отчеты для уравнений с R и с R̄
    """
    def w(x, y):
        m = pair.evaluate_w(x, y)
        return DenseTensor(m.data.T) if transposed else m

    def wbar(x, y):
        m = pair.evaluate_wbar(x, y)
        return DenseTensor(m.data.T) if transposed else m

    w_pq, w_qr, w_pr = w(p, q), w(q, r), w(p, r)
    wb_pq, wb_qr, wb_pr = wbar(p, q), wbar(q, r), wbar(p, r)

    star = einsum_network(STAR_SUM, wb_pq, wb_qr, w_pr)
    triangle = einsum_network(STAR_PRODUCT, w_pq, w_qr, wb_pr)
    dual_star = einsum_network(DUAL_STAR_SUM, wb_pq, wb_qr, w_pr)
    dual_triangle = einsum_network(DUAL_STAR_PRODUCT, w_pq, w_qr, wb_pr)

    scalar_r, _ = estimate_scalar_factor(star, triangle)
    scalar_rbar, _ = estimate_scalar_factor(dual_star, dual_triangle)
    gap = abs(scalar_r - scalar_rbar)
    agree = gap <= tol * max(1.0, abs(scalar_r))
    details = {"R_equals_Rbar": bool(agree), "scalar_gap": gap, "transposed": transposed}

    first = residual_report("spin_star_triangle", star, as_array(triangle) * scalar_r, tol,
                            scalar_R=scalar_r, scalar_Rbar=scalar_rbar, details=details)
    second = residual_report("spin_star_triangle_dual", dual_star, as_array(dual_triangle) * scalar_rbar, tol,
                             scalar_R=scalar_r, scalar_Rbar=scalar_rbar, details=details)
    return first, second


def verify_checkerboard(pair: CheckerboardPair, p, q, r,
                        tol: float = DEFAULT_TOLERANCE) -> Tuple[ResidualReport, ResidualReport]:
    """
    Проверяет пару шахматных уравнений для формулировки пары.

    Первое уравнение: левая часть из (plain, plain, barred) равна R, умноженному
    на правую часть из (barred, barred, plain). Второе: R̄, умноженный на левую
    часть из (barred, barred, plain), равен правой части из (plain, plain, barred).
    Каждый скаляр оценивается независимо.

    Args:
        pair: Шахматная пара весов
        p, q, r: Быстроты трех линий
        tol: Допуск относительной невязки

    Returns:
        Tuple[ResidualReport, ResidualReport]: Отчеты для уравнений с R и с R̄
    """
    spec_pair = None
    for family_type, specs in _CONTRACTIONS.items():
        if isinstance(pair.plain, family_type):
            spec_pair = specs
            break
    if spec_pair is None:
        raise ExtentMismatchError(f"Нет шахматного уравнения для формулировки {pair.plain.kind}")
    lhs_spec, rhs_spec = spec_pair
    plain, barred = pair.plain, pair.barred
    w_pq, w_qr, w_pr = plain.evaluate(p, q), plain.evaluate(q, r), plain.evaluate(p, r)
    b_pq, b_qr, b_pr = barred.evaluate(p, q), barred.evaluate(q, r), barred.evaluate(p, r)

    first_lhs = einsum_network(lhs_spec, w_pq, w_qr, b_pr)
    first_rhs = einsum_network(rhs_spec, b_pq, b_qr, w_pr)
    second_lhs = einsum_network(rhs_spec, w_pq, w_qr, b_pr)
    second_rhs = einsum_network(lhs_spec, b_pq, b_qr, w_pr)

    name = pair.kind.replace('-', '_')
    first = _proportional_report(name, first_lhs, first_rhs, tol, "R")
    second = _proportional_report(name + "_dual", second_lhs, second_rhs, tol, "Rbar")
    logger.debug(f"{name}: R={first.scalar_R}, R̄={second.scalar_Rbar}")
    return first, second


def sample_rapidity_triples(rng: np.random.Generator, count: int, low: float = 0.1, high: float = 1.2,
                            Q: Optional[int] = None, random_gauge: bool = False):
    """
    Случайные тройки быстрот для пакетной проверки.

    Значения p₀ равномерны на [low, high]. При заданном Q возвращаются
    векторные быстроты; калибровочные компоненты равны 1 или, при
    random_gauge, случайны на [0.5, 2].

    Args:
        rng: Генератор numpy
        count: Число троек
        low, high: Границы равномерного распределения
        Q: Число состояний для векторных быстрот
        random_gauge: Случайные калибровочные компоненты

    Returns:
        List[Tuple[Rapidity, Rapidity, Rapidity]]: Тройки быстрот
    """
    triples = []
    for _ in range(count):
        triple = []
        for value in rng.uniform(low, high, size=3):
            if Q is None:
                triple.append(Rapidity.scalar(float(value)))
                continue
            if random_gauge:
                comps = list(rng.uniform(0.5, 2.0, size=2 * Q + 1))
                comps[Q] = float(value)
            else:
                comps = [1.0] * (2 * Q + 1)
                comps[Q] = float(value)
            triple.append(Rapidity.vector(comps))
        triples.append(tuple(triple))
    return triples


def relabel_states(omega: VertexWeightFamily, permutation: Sequence[int]) -> VertexWeightFamily:
    """Семейство с состояниями, переименованными перестановкой на всех четырех линиях"""
    perm = np.asarray(permutation, dtype=int)
    inverse = np.argsort(perm)

    def evaluate(p, q):
        w = omega.evaluate(p, q).data
        return w[np.ix_(inverse, inverse, inverse, inverse)]

    return VertexWeightFamily(omega.Q, evaluate)
