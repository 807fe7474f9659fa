"""Отчеты о невязках уравнений"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.tensor_core import as_array, format_complex
from src.errors import ExtentMismatchError


@dataclass(frozen=True)
class ResidualReport:
    """
    Невязка проверки уравнения.

    max_abs - максимум модуля разности частей, relative - то же, деленное
    на максимум модуля левой части. scalar_R и scalar_Rbar заполняются,
    когда уравнение содержит скалярные множители.
    """

    equation: str
    max_abs: float
    relative: float
    tolerance: float
    worst_index: Tuple[int, ...] = ()
    scalar_R: Optional[complex] = None
    scalar_Rbar: Optional[complex] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.relative <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        """Запись отчета для JSON; индексы состояний начинаются с единицы"""
        record = {
            "equation": self.equation,
            "residual_abs": self.max_abs,
            "residual_rel": self.relative,
            "scalar_R": format_complex(self.scalar_R) if self.scalar_R is not None else None,
            "scalar_Rbar": format_complex(self.scalar_Rbar) if self.scalar_Rbar is not None else None,
            "worst_index": [i + 1 for i in self.worst_index],
            "pass": self.passed,
        }
        if self.details:
            record["details"] = to_jsonable(self.details)
        return record


def to_jsonable(value):
    """Приводит комплексные числа и значения numpy к типам JSON"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


def residual_report(equation: str, lhs, rhs, tol: float,
                    scalar_R: Optional[complex] = None, scalar_Rbar: Optional[complex] = None,
                    details: Optional[Dict[str, Any]] = None) -> ResidualReport:
    """
    Строит отчет по разности двух тензоров.

    Относительная невязка нормируется на max|lhs|. Если левая часть
    тождественно равна нулю, нормировка идет по max|rhs|, а при нулевых
    обеих частях невязка равна нулю.

    Args:
        equation: Имя проверяемого уравнения
        lhs: Левая часть
        rhs: Правая часть (уже умноженная на скалярный множитель)
        tol: Допуск относительной невязки
        scalar_R, scalar_Rbar: Оцененные скалярные множители
        details: Дополнительные сведения для отчета

    Returns:
        ResidualReport: Отчет о невязке
    """
    left, right = as_array(lhs), as_array(rhs)
    if left.shape != right.shape:
        raise ExtentMismatchError(f"Части уравнения имеют разные размерности: {left.shape} и {right.shape}")
    diff = np.abs(left - right)
    if diff.size == 0:
        return ResidualReport(equation, 0.0, 0.0, tol, (), scalar_R, scalar_Rbar, dict(details or {}))
    flat_index = int(np.argmax(diff))
    worst = tuple(int(i) for i in np.unravel_index(flat_index, diff.shape)) if diff.ndim else ()
    max_abs = float(diff.reshape(-1)[flat_index])
    scale = float(np.max(np.abs(left)))
    if scale == 0.0:
        scale = float(np.max(np.abs(right)))
    relative = max_abs / scale if scale > 0 else 0.0
    return ResidualReport(equation, max_abs, relative, tol, worst, scalar_R, scalar_Rbar, dict(details or {}))


def combine_reports(equation: str, reports, tol: float) -> ResidualReport:
    """Объединяет отчеты нескольких соотношений в один по наихудшей невязке"""
    reports = list(reports)
    worst = max(reports, key=lambda r: r.relative)
    details = {r.equation: {"residual_abs": r.max_abs, "residual_rel": r.relative} for r in reports}
    return ResidualReport(equation, max(r.max_abs for r in reports), worst.relative, tol,
                          worst.worst_index, worst.scalar_R, worst.scalar_Rbar, details)

