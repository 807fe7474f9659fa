"""
Матричные формы уравнения Янга–Бакстера.

Операторы действуют на векторы-столбцы пространства N узлов по Q состояний:
строки нумеруют выходящие состояния (β₁…β_N), столбцы - входящие (α₁…α_N),
узел 1 - старший разряд. Произведения применяются справа налево.

Модуль строит матрицы R_ij и Ř_{i,i+1}, проверяет соотношения кос,
строит трансфер-матрицы и гамильтониан, извлекает классическую r-матрицу.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.errors import (ExtentMismatchError, IllConditionedError, ParameterError, PreconditionError,
                        SizeCapError)
from src.reports import ResidualReport, combine_reports, residual_report
from src.tensor_core import DenseTensor, as_array, max_abs_diff
from src.weight_models import (Rapidity, SlmnParams, SlmnVertexFamily, VertexWeightFamily,
                               scalar_value, slmn_vertex_weight)

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 4096
DEFAULT_DERIVATIVE_STEP = 1e-5
DEFAULT_CONDITION_LIMIT = 1e12
IDENTITY_TOLERANCE = 1e-12

MATRIX_YBE_KINDS = ("r-form", "rcheck", "braid", "difference")


@dataclass(frozen=True)
class OperatorMatrix:
    """Квадратная матрица размерности Qᴺ на N узлах"""

    sites: int
    local_dim: int
    matrix: DenseTensor
    label: str = ""

    def __post_init__(self):
        expected = self.local_dim ** self.sites
        if self.matrix.extents != (expected, expected):
            raise ExtentMismatchError(
                f"Оператор {self.label} имеет размерности {self.matrix.extents}, ожидалось {expected}×{expected}")

    @classmethod
    def from_array(cls, array, sites: int, local_dim: int, label: str = "") -> "OperatorMatrix":
        return cls(sites, local_dim, DenseTensor(array), label)

    @property
    def dim(self) -> int:
        return self.matrix.extents[0]

    @property
    def array(self) -> np.ndarray:
        return self.matrix.data


@dataclass(frozen=True)
class FamilyOfOperators:
    """Параметрическое семейство операторов (R, Ř, K или T)"""

    evaluate: Callable[..., OperatorMatrix]
    kind: str

    def __call__(self, *args) -> OperatorMatrix:
        return self.evaluate(*args)


def _operator_array(op) -> np.ndarray:
    if isinstance(op, OperatorMatrix):
        return op.array
    return as_array(op)


# ---------------------------------------------------------------------------
# Вложение локальных операторов
# ---------------------------------------------------------------------------

def embed_two_site(local, i: int, j: int, sites: int) -> np.ndarray:
    """
    Вкладывает двухузельный оператор Q²×Q² на узлы i, j (нумерация с 1).

    Строки local нумеруют выходящие пары (o_i, o_j), столбцы - входящие.
    На остальных узлах действует единичный оператор.
    """
    local = as_array(local)
    Q = int(round(np.sqrt(local.shape[0])))
    if local.shape != (Q * Q, Q * Q):
        raise ExtentMismatchError(f"Двухузельный оператор должен быть Q²×Q², получено {local.shape}")
    if i == j or not (1 <= i <= sites) or not (1 <= j <= sites):
        raise ParameterError(f"Некорректные узлы ({i}, {j}) для {sites} узлов")
    dim = Q ** sites
    identity = np.eye(dim, dtype=np.complex128).reshape((Q,) * sites + (dim,))
    applied = np.tensordot(local.reshape(Q, Q, Q, Q), identity, axes=([2, 3], [i - 1, j - 1]))
    applied = np.moveaxis(applied, [0, 1], [i - 1, j - 1])
    return applied.reshape(dim, dim)


def embed_one_site(local, i: int, sites: int) -> np.ndarray:
    """Вкладывает одноузельный оператор Q×Q на узел i"""
    local = as_array(local)
    Q = local.shape[0]
    if local.shape != (Q, Q):
        raise ExtentMismatchError(f"Одноузельный оператор должен быть квадратным, получено {local.shape}")
    if not (1 <= i <= sites):
        raise ParameterError(f"Узел {i} вне диапазона 1..{sites}")
    dim = Q ** sites
    identity = np.eye(dim, dtype=np.complex128).reshape((Q,) * sites + (dim,))
    applied = np.tensordot(local, identity, axes=([1], [i - 1]))
    applied = np.moveaxis(applied, 0, i - 1)
    return applied.reshape(dim, dim)


def r_local(weight) -> np.ndarray:
    """Локальная матрица R: элемент [(β_i β_j), (α_i α_j)] равен ω[α_i][α_j][β_j][β_i]"""
    w = as_array(weight)
    Q = w.shape[0]
    return np.transpose(w, (3, 2, 0, 1)).reshape(Q * Q, Q * Q)


def rcheck_local(weight) -> np.ndarray:
    """Локальная матрица Ř: элемент [(β_i β_{i+1}), (α_i α_{i+1})] равен ω[α_i][α_{i+1}][β_i][β_{i+1}]"""
    w = as_array(weight)
    Q = w.shape[0]
    return np.transpose(w, (2, 3, 0, 1)).reshape(Q * Q, Q * Q)


def build_r_matrix(omega: VertexWeightFamily, i: int, j: int, sites: int, p_i, p_j) -> OperatorMatrix:
    """
    Матрица R_ij(p_i, p_j) на N узлах.

    Args:
        omega: Вершинное семейство
        i, j: Узлы, 1 <= i < j <= N
        sites: Число узлов N
        p_i, p_j: Быстроты линий узлов i и j

    Returns:
        OperatorMatrix: Матрица Qᴺ×Qᴺ
    """
    if not (1 <= i < j <= sites):
        raise ParameterError(f"Требуется 1 <= i < j <= N, получено i={i}, j={j}, N={sites}")
    local = r_local(omega.evaluate(p_i, p_j))
    return OperatorMatrix.from_array(embed_two_site(local, i, j, sites), sites, omega.Q, f"R{i}{j}")


def build_rcheck_matrix(omega: VertexWeightFamily, i: int, sites: int, p, q) -> OperatorMatrix:
    """
    Матрица Ř_{i,i+1}(p, q) на N узлах.

    Args:
        omega: Вершинное семейство
        i: Левый узел, 1 <= i <= N-1
        sites: Число узлов N
        p, q: Быстроты

    Returns:
        OperatorMatrix: Матрица Qᴺ×Qᴺ
    """
    if not (1 <= i <= sites - 1):
        raise ParameterError(f"Требуется 1 <= i <= N-1, получено i={i}, N={sites}")
    local = rcheck_local(omega.evaluate(p, q))
    return OperatorMatrix.from_array(embed_two_site(local, i, i + 1, sites), sites, omega.Q, f"Ř{i}{i + 1}")


def difference_rapidities(omega: VertexWeightFamily, u) -> Tuple:
    """Пара быстрот (u, 0) в форме, которую принимает семейство"""
    if isinstance(omega, SlmnVertexFamily):
        return Rapidity.trivial(u, omega.Q), Rapidity.trivial(0, omega.Q)
    return complex(u), 0j


def rcheck_difference_family(omega: VertexWeightFamily, sites: int = 2, i: int = 1) -> FamilyOfOperators:
    """Семейство Ř(u) = Ř(u, 0) для весов разностного типа"""
    def evaluate(u) -> OperatorMatrix:
        return build_rcheck_matrix(omega, i, sites, *difference_rapidities(omega, u))

    return FamilyOfOperators(evaluate, "Rcheck")


def commutator_norm(a, b) -> float:
    """max |AB - BA|"""
    A, B = _operator_array(a), _operator_array(b)
    if A.shape != B.shape:
        raise ExtentMismatchError(f"Разные размерности операторов: {A.shape} и {B.shape}")
    return max_abs_diff(A @ B, B @ A)


# ---------------------------------------------------------------------------
# Соотношения кос
# ---------------------------------------------------------------------------

def ybe_operators(kind: str, omega: VertexWeightFamily, p, q, r, sites: int = 3) -> Dict:
    """
    Набор операторов для check_matrix_ybe.

    Ключи: R12, R13, R23 для "r-form"; A_xy = Ř12, B_xy = Ř23 при аргументах
    xy для "rcheck" и "difference"; A, B для "braid". При sites >= 4 ключ
    "far" содержит пары операторов на непересекающихся узлах.

    Args:
        kind: Вид соотношения
        omega: Вершинное семейство
        p, q, r: Быстроты трех линий (для "difference" - скалярные)
        sites: Число узлов, не меньше 3

    Returns:
        Dict: Операторы соотношения
    """
    if kind not in MATRIX_YBE_KINDS:
        raise ParameterError(f"Неизвестный вид соотношения '{kind}', допустимы {MATRIX_YBE_KINDS}")
    if sites < 3:
        raise ParameterError(f"Соотношения кос требуют не менее трех узлов, получено {sites}")
    ops: Dict = {}
    if kind == "r-form":
        ops["R12"] = build_r_matrix(omega, 1, 2, sites, p, q)
        ops["R13"] = build_r_matrix(omega, 1, 3, sites, p, r)
        ops["R23"] = build_r_matrix(omega, 2, 3, sites, q, r)
        return ops
    if kind == "braid":
        ops["A"] = build_rcheck_matrix(omega, 1, sites, p, q)
        ops["B"] = build_rcheck_matrix(omega, 2, sites, p, q)
        if sites >= 4:
            ops["far"] = [(ops["A"], build_rcheck_matrix(omega, 3, sites, p, q))]
        return ops
    if kind == "difference":
        p, q, r = scalar_value(p), scalar_value(q), scalar_value(r)
        arguments = {"pq": difference_rapidities(omega, p - q),
                     "pr": difference_rapidities(omega, p - r),
                     "qr": difference_rapidities(omega, q - r)}
    else:
        arguments = {"pq": (p, q), "pr": (p, r), "qr": (q, r)}
    for key, (x, y) in arguments.items():
        ops["A_" + key] = build_rcheck_matrix(omega, 1, sites, x, y)
        ops["B_" + key] = build_rcheck_matrix(omega, 2, sites, x, y)
    if sites >= 4:
        ops["far"] = [
            (ops["A_pq"], build_rcheck_matrix(omega, 3, sites, *arguments["qr"])),
            (ops["A_pr"], build_rcheck_matrix(omega, 3, sites, *arguments["pq"])),
        ]
    return ops


def _relation_sides(kind: str, m: Dict[str, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    if kind == "r-form":
        return m["R23"] @ m["R13"] @ m["R12"], m["R12"] @ m["R13"] @ m["R23"]
    if kind == "rcheck":
        return m["A_qr"] @ m["B_pr"] @ m["A_pq"], m["B_pq"] @ m["A_pr"] @ m["B_qr"]
    if kind == "difference":
        return m["A_pq"] @ m["B_pr"] @ m["A_qr"], m["B_qr"] @ m["A_pr"] @ m["B_pq"]
    return m["A"] @ m["B"] @ m["A"], m["B"] @ m["A"] @ m["B"]


def check_matrix_ybe(kind: str, operators: Dict, tol: float = 1e-9) -> ResidualReport:
    """
    Проверяет матричное соотношение выбранного вида.

    - "r-form": R23(q,r)R13(p,r)R12(p,q) = R12(p,q)R13(p,r)R23(q,r)
    - "rcheck": Ř12(q,r)Ř23(p,r)Ř12(p,q) = Ř23(p,q)Ř12(p,r)Ř23(q,r)
    - "difference": Ř12(p-q)Ř23(p-r)Ř12(q-r) = Ř23(q-r)Ř12(p-r)Ř23(p-q)
    - "braid": Ř1Ř2Ř1 = Ř2Ř1Ř2 для постоянной матрицы

    Пары из ключа "far" дополнительно проверяются на коммутацию.

    Args:
        kind: Вид соотношения
        operators: Словарь операторов (см. ybe_operators)
        tol: Допуск относительной невязки

    Returns:
        ResidualReport: Наихудшая из невязок соотношения и коммутаций
    """
    if kind not in MATRIX_YBE_KINDS:
        raise ParameterError(f"Неизвестный вид соотношения '{kind}', допустимы {MATRIX_YBE_KINDS}")
    far = operators.get("far", [])
    matrices = {name: _operator_array(op) for name, op in operators.items() if name != "far"}
    shapes = {m.shape for m in matrices.values()}
    shapes.update(_operator_array(x).shape for pair in far for x in pair)
    if len(shapes) != 1:
        raise ExtentMismatchError(f"Операторы соотношения имеют разные размерности: {sorted(shapes)}")
    try:
        lhs, rhs = _relation_sides(kind, matrices)
    except KeyError as e:
        raise ParameterError(f"Для соотношения '{kind}' не задан оператор {e}") from e
    name = "matrix_ybe_" + kind.replace('-', '_')
    reports = [residual_report(name, lhs, rhs, tol)]
    for index, (a, b) in enumerate(far):
        A, B = _operator_array(a), _operator_array(b)
        reports.append(residual_report(f"far_commutation_{index + 1}", A @ B, B @ A, tol))
    if len(reports) == 1:
        return reports[0]
    return combine_reports(name, reports, tol)


# ---------------------------------------------------------------------------
# Трансфер-матрица и гамильтониан
# ---------------------------------------------------------------------------

def transfer_matrix(omega: VertexWeightFamily, length: int, p, q,
                    max_states: int = DEFAULT_MAX_STATES) -> OperatorMatrix:
    """
    Трансфер-матрица периодической строки из L вершин.

    T[α′, α] = Σ_μ Π_k ω[α_k][μ_k][μ_{k+1}][α′_k](p, q), μ_{L+1} = μ_1.
    Вертикальные линии несут быстроту p, вспомогательная горизонтальная - q.

    Args:
        omega: Вершинное семейство
        length: Число узлов L >= 1
        p: Быстрота вертикальных линий
        q: Быстрота вспомогательной линии
        max_states: Предел размерности Qᴸ

    Returns:
        OperatorMatrix: Матрица Qᴸ×Qᴸ
    """
    if length < 1:
        raise ParameterError(f"Длина строки должна быть положительной, получено {length}")
    Q = omega.Q
    if Q ** length > max_states:
        raise SizeCapError(f"Размерность {Q}^{length} = {Q ** length} превышает предел {max_states}")
    # t[μ_k][μ_{k+1}][α′_k][α_k]
    t = np.transpose(omega.evaluate(p, q).data, (1, 2, 3, 0))
    chain = t
    for k in range(1, length):
        chain = np.einsum('abOI,bcoi->acOoIi', chain, t).reshape(Q, Q, Q ** (k + 1), Q ** (k + 1))
    matrix = np.einsum('aaOI->OI', chain)
    return OperatorMatrix.from_array(matrix, length, Q, "T")


def transfer_family(omega: VertexWeightFamily, length: int, p,
                    max_states: int = DEFAULT_MAX_STATES) -> FamilyOfOperators:
    """Семейство T(p|q) по быстроте вспомогательной линии q при фиксированном p"""
    return FamilyOfOperators(lambda q: transfer_matrix(omega, length, p, q, max_states), "T")


def _shift(value, h: float):
    if isinstance(value, Rapidity):
        return value.shift(h)
    return complex(value) + h


def hamiltonian_from_family(family: FamilyOfOperators, q0, h: float = DEFAULT_DERIVATIVE_STEP,
                            condition_limit: float = DEFAULT_CONDITION_LIMIT) -> OperatorMatrix:
    """
    Логарифмическая производная H = T(q₀)⁻¹·dT/dq в точке q₀.

    Производная берется центральной разностью с шагом h.

    Args:
        family: Семейство T(q)
        q0: Точка дифференцирования (обычно точка распада q₀ = p)
        h: Шаг разности
        condition_limit: Предел числа обусловленности T(q₀)

    Returns:
        OperatorMatrix: Гамильтониан
    """
    if not h > 0:
        raise ParameterError(f"Шаг производной должен быть положительным, получено {h}")
    t0 = family(q0)
    condition = float(np.linalg.cond(t0.array))
    if not np.isfinite(condition) or condition > condition_limit:
        raise IllConditionedError(f"Число обусловленности T(q₀) = {condition:.3e} превышает {condition_limit:.1e}")
    derivative = (family(_shift(q0, h)).array - family(_shift(q0, -h)).array) / (2 * h)
    hamiltonian = np.linalg.solve(t0.array, derivative)
    logger.debug(f"Гамильтониан построен, cond(T) = {condition:.3e}")
    return OperatorMatrix.from_array(hamiltonian, t0.sites, t0.local_dim, "H")


# ---------------------------------------------------------------------------
# Классическая r-матрица
# ---------------------------------------------------------------------------

def classical_slmn_family(params: SlmnParams, p=0.7, q=0.3) -> FamilyOfOperators:
    """Семейство R₁₂(ħ) решения sl(m|n) с η = ħ при фиксированных p₀, q₀"""
    Q = params.Q

    def evaluate(hbar) -> OperatorMatrix:
        omega = slmn_vertex_weight(replace(params, eta=complex(hbar)))
        return build_r_matrix(omega, 1, 2, 2, Rapidity.trivial(p, Q), Rapidity.trivial(q, Q))

    return FamilyOfOperators(evaluate, "R")


def classical_six_vertex_family(p=0.7, q=0.3, n: int = 2) -> FamilyOfOperators:
    """
    Семейство R₁₂(ħ) классического решения sl(0|n) при фиксированных p₀, q₀.

    При ħ = 0 матрица R равна единичной.
    """
    return classical_slmn_family(SlmnParams.classical(0.0, n), p, q)


def extract_classical_r(family: FamilyOfOperators, hbar: float,
                        identity_tol: float = IDENTITY_TOLERANCE) -> OperatorMatrix:
    """
    Классическая r-матрица X = (R(ħ) - R(-ħ))/(2ħ).

    Args:
        family: Семейство R(ħ) с R(0) = 1
        hbar: Шаг ħ > 0
        identity_tol: Допуск проверки R(0) = 1

    Returns:
        OperatorMatrix: Матрица X
    """
    if not hbar > 0:
        raise ParameterError(f"ħ должно быть положительным, получено {hbar}")
    r0 = family(0.0)
    gap = max_abs_diff(r0.array, np.eye(r0.dim))
    if gap > identity_tol:
        raise PreconditionError(f"R(0) отличается от единичной матрицы на {gap:.3e}: разложение не в той точке")
    x = (family(hbar).array - family(-hbar).array) / (2 * hbar)
    return OperatorMatrix.from_array(x, r0.sites, r0.local_dim, "X")


def check_cybe(x12, x13, x23, tol: float = 1e-9) -> ResidualReport:
    """
    Проверяет классическое уравнение [X12,X13] + [X12,X23] + [X13,X23] = 0.

    Сравниваются суммы прямых и обратных произведений.
    """
    a, b, c = _operator_array(x12), _operator_array(x13), _operator_array(x23)
    if not (a.shape == b.shape == c.shape):
        raise ExtentMismatchError(f"Разные размерности: {a.shape}, {b.shape}, {c.shape}")
    forward = a @ b + a @ c + b @ c
    backward = b @ a + c @ a + c @ b
    return residual_report("cybe", forward, backward, tol)


def classical_triple(family_factory: Callable[..., FamilyOfOperators], p, q, r,
                     hbar: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """X12(p,q), X13(p,r), X23(q,r), вложенные в пространство трех узлов"""
    triple = []
    for (x, y), (i, j) in (((p, q), (1, 2)), ((p, r), (1, 3)), ((q, r), (2, 3))):
        local = extract_classical_r(family_factory(x, y), hbar).array
        triple.append(embed_two_site(local, i, j, 3))
    return tuple(triple)


def classical_convergence_study(family_factory: Callable[..., FamilyOfOperators] = classical_six_vertex_family,
                                p=0.9, q=0.5, r=0.2, hbars: Sequence[float] = (1e-2, 1e-3, 1e-4),
                                tol: float = 1e-9) -> Tuple[pd.DataFrame, float]:
    """
    Сходимость извлечения X при уменьшении ħ.

    Для каждого ħ сообщается невязка классического уравнения и погрешность
    центральной разности |X(ħ) - X_ref|, где X_ref = (4X(ħ/2) - X(ħ))/3.
    Наклон погрешности в логарифмическом масштабе близок к 2. Невязка
    классического уравнения для встроенного семейства остается на уровне
    ошибок округления (1e-15..1e-12) и слегка растет при уменьшении ħ,
    поэтому наклон по ней не оценивается.

    Args:
        family_factory: Функция (p, q) -> семейство R(ħ)
        p, q, r: Быстроты трех линий
        hbars: Значения ħ
        tol: Допуск невязки

    Returns:
        Tuple[pd.DataFrame, float]: Таблица (hbar, cybe_residual, extraction_defect, pass) и наклон
    """
    rows = []
    for hbar in hbars:
        coarse = classical_triple(family_factory, p, q, r, hbar)
        fine = classical_triple(family_factory, p, q, r, hbar / 2)
        report = check_cybe(*coarse, tol=tol)
        defect = max(max_abs_diff(c, (4 * f - c) / 3) for c, f in zip(coarse, fine))
        rows.append({"hbar": float(hbar), "cybe_residual": report.relative,
                     "extraction_defect": defect, "pass": report.passed})
    table = pd.DataFrame(rows, columns=["hbar", "cybe_residual", "extraction_defect", "pass"])
    slope = float(np.polyfit(np.log(table["hbar"]), np.log(table["extraction_defect"]), 1)[0])
    logger.info(f"Порядок сходимости извлечения классической r-матрицы: {slope:.3f}")
    return table, slope


# ---------------------------------------------------------------------------
# Экспорт
# ---------------------------------------------------------------------------

def spectrum(op) -> List[complex]:
    """Собственные значения, упорядоченные по вещественной, затем мнимой части"""
    values = np.linalg.eigvals(_operator_array(op))
    return sorted((complex(v) for v in values), key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def operator_to_json(op: OperatorMatrix) -> Dict:
    """Оператор в формате комплексных чисел файлов весов"""
    return {
        "kind": "operator",
        "label": op.label,
        "sites": op.sites,
        "Q": op.local_dim,
        "data": op.matrix.to_nested(),
    }
