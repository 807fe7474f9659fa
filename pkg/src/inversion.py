"""Локальное и глобальное соотношения инверсии"""

import logging
from typing import Iterable, Optional, Tuple

import numpy as np
import pandas as pd

from src.errors import PreconditionError, ProportionalityError, SizeCapError
from src.operator_algebra import DEFAULT_MAX_STATES, build_rcheck_matrix, transfer_matrix
from src.reports import ResidualReport, residual_report
from src.weight_models import VertexWeightFamily
from src.ybe_verify import estimate_scalar_factor

logger = logging.getLogger(__name__)


def _check_decoupling(omega: VertexWeightFamily, p, tol: float) -> None:
    Q = omega.Q
    eye = np.eye(Q, dtype=np.complex128)
    pattern = np.einsum('al,mb->amlb', eye, eye)
    weight = omega.evaluate(p, p).data
    scale = float(np.max(np.abs(weight)))
    if scale == 0:
        raise PreconditionError("Вес при равных быстротах тождественно равен нулю")
    scalar, gap = estimate_scalar_factor(weight, pattern)
    if gap > tol * scale:
        raise PreconditionError(f"Вес не распадается при равных быстротах: отклонение {gap / scale:.3e}")


def local_inversion(omega: VertexWeightFamily, p, q, tol: float = 1e-9) -> Tuple[complex, ResidualReport]:
    """
    Проверяет локальную инверсию Ř(p,q)·Ř(q,p) = C(p,q)·1.

    Args:
        omega: Вершинное семейство, распадающееся при равных быстротах
        p, q: Быстроты
        tol: Допуск относительной невязки

    Returns:
        Tuple[complex, ResidualReport]: Константа C(p,q) и отчет
    """
    _check_decoupling(omega, p, tol)
    forward = build_rcheck_matrix(omega, 1, 2, p, q).array
    backward = build_rcheck_matrix(omega, 1, 2, q, p).array
    product = forward @ backward
    identity = np.eye(product.shape[0], dtype=np.complex128)
    constant, _ = estimate_scalar_factor(product, identity)
    report = residual_report("local_inversion", product, constant * identity, tol,
                             scalar_R=constant, details={"C": constant})
    if not report.passed:
        raise ProportionalityError(
            f"Ř(p,q)Ř(q,p) не пропорционально единичной матрице: невязка {report.relative:.3e}")
    return constant, report


def torus_partition_function(omega: VertexWeightFamily, rows: int, cols: int, p, q,
                             max_states: int = DEFAULT_MAX_STATES) -> complex:
    """Z_{M,N}(p,q) = Tr T_N(p|q)^M на торе из M строк по N вершин"""
    T = transfer_matrix(omega, cols, p, q, max_states).array
    return complex(np.trace(np.linalg.matrix_power(T, rows)))


def global_inversion_demo(omega: VertexWeightFamily, sizes: Iterable, p, q,
                          max_states: int = DEFAULT_MAX_STATES, tol: float = 1e-9) -> pd.DataFrame:
    """
    Демонстрация глобальной инверсии на малых торах.

    Для каждого размера M×N сообщается отношение
    (Z_{M,N}(p,q)·Z_{N,M}(q,p))^{1/MN} / C(q,p) (главное значение корня).
    Ничего не утверждается: таблица показывает тенденцию.

    Args:
        omega: Вершинное семейство, проходящее локальную инверсию
        sizes: Целые n (тор n×n) или пары (M, N)
        p, q: Быстроты
        max_states: Предел размерности трансфер-матрицы
        tol: Допуск локальной инверсии

    Returns:
        pd.DataFrame: Столбцы M, N, Z_pq, Z_qp, ratio
    """
    constant, _ = local_inversion(omega, q, p, tol)
    rows = []
    for size in sizes:
        M, N = (size, size) if isinstance(size, int) else tuple(size)
        for extent in (M, N):
            if omega.Q ** extent > max_states:
                raise SizeCapError(f"Тор {M}×{N}: размерность {omega.Q}^{extent} превышает предел {max_states}")
        z_pq = torus_partition_function(omega, M, N, p, q, max_states)
        z_qp = torus_partition_function(omega, N, M, q, p, max_states)
        ratio = complex(np.power(complex(z_pq * z_qp), 1.0 / (M * N)) / constant)
        rows.append({"M": M, "N": N, "Z_pq": z_pq, "Z_qp": z_qp, "ratio": ratio})
        logger.debug(f"Инверсия на торе {M}×{N}: отношение {ratio:.6g}")
    return pd.DataFrame(rows, columns=["M", "N", "Z_pq", "Z_qp", "ratio"])
