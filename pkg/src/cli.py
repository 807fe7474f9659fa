"""
Интерфейс командной строки ybx.

Подкоманда печатает в stdout поток JSON-записей, по одной на строку:
заголовок с зерном генератора, записи проверок и итоговую запись.
Диагностика идет в stderr через логгер.

Коды завершения: 0 - все проверки прошли, 1 - есть проваленные проверки
или численные ошибки, 2 - ошибка использования, 3 - ошибка ввода-вывода.
"""

import argparse
import functools
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import pandas as pd

from src import __version__
from src.config import Config
from src.converters import (embed_spin_as_checkerboard_irf, extract_spin_from_checkerboard_irf,
                            irf_vertex_to_vertex, lift_irf_to_irf_vertex, lift_vertex_to_irf_vertex,
                            square_weight_compose, vertex_to_spin)
from src.errors import NetlistError, ParameterError, RapidityFormError, YbxError
from src.factory import ToolkitFactory
from src.interfaces import ILogger
from src.inversion import global_inversion_demo, local_inversion
from src.logger import Logger
from src.network_appendix import (GaussianStar, ResistorNetwork, equivalent_impedance,
                                  gaussian_star_triangle_check, load_netlist, netlist_to_dict,
                                  perturbed_power_increase, potts_limit_star_triangle_check, reduce_network,
                                  save_netlist, solve_kirchhoff)
from src.operator_algebra import (MATRIX_YBE_KINDS, check_matrix_ybe, classical_convergence_study,
                                  classical_six_vertex_family, classical_slmn_family, hamiltonian_from_family,
                                  rcheck_difference_family, transfer_family, transfer_matrix, ybe_operators)
from src.reflection import solve_diagonal_k
from src.reports import ResidualReport, residual_report, to_jsonable
from src.tensor_core import format_complex, parse_complex
from src.weight_io import catalog_document, catalog_names, describe_catalog, load_weight_file, \
    save_weight_file, weights_from_dict
from src.weight_models import (CheckerboardPair, IrfVertexWeightFamily, IrfWeightFamily, PottsParams, Rapidity,
                               SlmnVertexFamily, SpinWeightPair, VertexWeightFamily, potts_rapidity_relation_check,
                               potts_spin_weights, scalar_value)
from src.ybe_verify import (sample_rapidity_triples, verify_checkerboard, verify_irf_vertex_ybe, verify_irf_ybe,
                            verify_spin_star_triangle, verify_vertex_ybe)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

CONVERSION_TARGETS = ("square-vertex", "checkerboard-irf", "spin", "vertex", "irf-vertex")

# Ключи аргументов, которые переходят в поля RunConfig, а не в options
_COMMON_KEYS = {"command", "action", "seed", "tol", "jobs", "format", "output", "trials", "weights", "input"}


class UsageError(Exception):
    """Некорректное сочетание аргументов"""


class InputError(Exception):
    """Входной файл не читается или не соответствует схеме"""


@dataclass
class RunConfig:
    """Полностью разрешенные параметры одного запуска"""

    subcommand: str
    inputs: List[str] = field(default_factory=list)
    trials: int = 10
    seed: int = 0
    tol: float = 1e-9
    output: Optional[str] = None
    jobs: int = 1
    fmt: str = "json"
    options: Dict[str, Any] = field(default_factory=dict)
    rapidity_range: Tuple[float, float] = (0.1, 1.2)
    max_states: int = 4096
    derivative_step: float = 1e-5
    condition_limit: float = 1e12
    metrics_file: Optional[str] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"Допуск должен быть положительным, получено {self.tol}")
        if self.trials < 1:
            raise ParameterError(f"Число испытаний должно быть не меньше 1, получено {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError(f"Зерно должно быть 64-битным беззнаковым целым, получено {self.seed}")
        if self.jobs < 1:
            raise ParameterError(f"Число потоков должно быть не меньше 1, получено {self.jobs}")
        if self.fmt not in ("json", "table"):
            raise ParameterError(f"Неизвестный формат отчета '{self.fmt}'")
        low, high = self.rapidity_range
        if not low < high:
            raise ParameterError(f"Пустой диапазон быстрот [{low}, {high}]")


@dataclass
class _RunContext:
    config: RunConfig
    logger: ILogger
    rng: np.random.Generator
    run_ordered: Callable[[List[Callable]], List]

    def option(self, name: str, default=None):
        value = self.config.options.get(name)
        return default if value is None else value


# ---------------------------------------------------------------------------
# Разбор аргументов
# ---------------------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Зерно генератора (по умолчанию YBX_SEED)")
    common.add_argument("--tol", type=float, help="Допуск относительной невязки (по умолчанию YBX_TOLERANCE)")
    common.add_argument("--jobs", type=int, help="Число рабочих потоков (по умолчанию YBX_JOBS)")
    common.add_argument("--trials", type=int, default=10, help="Число случайных испытаний")
    common.add_argument("--format", choices=("json", "table"), default="json", help="Формат отчета")
    common.add_argument("--output", help="Файл отчета вместо stdout")
    return common


def _weights_parser(required: bool = True) -> argparse.ArgumentParser:
    weights = argparse.ArgumentParser(add_help=False)
    group = weights.add_mutually_exclusive_group(required=required)
    group.add_argument("--weights", help="Файл весов (JSON)")
    group.add_argument("--builtin", choices=catalog_names(), help="Встроенное решение из каталога")
    return weights


def build_parser() -> argparse.ArgumentParser:
    """Парсер аргументов ybx со всеми подкомандами"""
    common = _common_parser()
    weights = _weights_parser()
    parser = argparse.ArgumentParser(prog="ybx", description="Численная проверка уравнений Янга–Бакстера")
    parser.add_argument("--version", action="version", version=f"ybx {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    catalog = commands.add_parser("catalog", help="Каталог встроенных решений")
    catalog_actions = catalog.add_subparsers(dest="action", required=True)
    catalog_actions.add_parser("list", parents=[common], help="Список решений")
    emit = catalog_actions.add_parser("emit", parents=[common], help="Файл весов решения")
    emit.add_argument("name", choices=catalog_names())
    emit.add_argument("--to", help="Записать файл весов по этому пути")

    verify = commands.add_parser("verify", parents=[common, weights], help="Пакетная проверка YBE")
    verify.add_argument("--transposed", action="store_true", help="Транспонированный вариант звезды–треугольника")
    verify.add_argument("--random-gauge", action="store_true", help="Случайные калибровочные компоненты быстрот")

    convert = commands.add_parser("convert", parents=[common, weights], help="Преобразование формулировки весов")
    convert.add_argument("--into", required=True, choices=CONVERSION_TARGETS)
    convert.add_argument("--to", required=True, help="Файл результата")
    convert.add_argument("--p", help="Быстрота табулирования p (для square-vertex - пара 'p1,p2')")
    convert.add_argument("--q", help="Быстрота табулирования q")

    operators = commands.add_parser("operators", help="Матричные операторы")
    operator_actions = operators.add_subparsers(dest="action", required=True)
    ybe = operator_actions.add_parser("ybe", parents=[common, weights], help="Матричные формы YBE")
    ybe.add_argument("--kind", choices=MATRIX_YBE_KINDS, default="r-form")
    ybe.add_argument("--sites", type=int, default=3)
    transfer = operator_actions.add_parser("transfer", parents=[common, weights], help="Коммутация трансфер-матриц")
    transfer.add_argument("--length", type=int, default=3)
    transfer.add_argument("--grid", type=int, default=5, help="Число точек сетки q")
    transfer.add_argument("--p", help="Быстрота вертикальных линий")
    transfer.add_argument("--hamiltonian", action="store_true", help="Проверить коммутацию H с T")
    transfer.add_argument("--hamiltonian-tol", type=float, default=1e-7)
    transfer.add_argument("--derivative-step", type=float)
    cybe = operator_actions.add_parser("cybe", parents=[common, _weights_parser(required=False)],
                                       help="Классическое уравнение Янга–Бакстера")
    cybe.add_argument("--hbars", default="1e-2,1e-3,1e-4")
    cybe.add_argument("--min-slope", type=float, default=1.8)
    reflection = operator_actions.add_parser("reflection", parents=[common, weights], help="Диагональное K")
    reflection.add_argument("--mu", type=float, default=0.5)
    reflection.add_argument("--grid", type=int, default=10)
    operator_actions.add_parser("inversion", parents=[common, weights], help="Локальная инверсия")

    net = commands.add_parser("net", help="Электрические цепи")
    net_actions = net.add_subparsers(dest="action", required=True)
    solve = net_actions.add_parser("solve", parents=[common], help="Система Кирхгофа")
    solve.add_argument("--input", required=True)
    reduce = net_actions.add_parser("reduce", parents=[common], help="Упрощение цепи")
    reduce.add_argument("--input", required=True)
    reduce.add_argument("--terminals", help="Выводы через запятую")
    reduce.add_argument("--to", help="Файл упрощенной цепи")
    equiv = net_actions.add_parser("equiv", parents=[common], help="Эквивалентный импеданс")
    equiv.add_argument("--input", required=True)
    equiv.add_argument("--between", required=True, help="Два узла через запятую")

    gaussian = commands.add_parser("gaussian", help="Гауссова модель")
    gaussian_actions = gaussian.add_subparsers(dest="action", required=True)
    check = gaussian_actions.add_parser("check", parents=[common], help="Звезда–треугольник гауссовой модели")
    check.add_argument("--beta", type=float, default=1.0)
    check.add_argument("--legs", default="1,2,3")
    check.add_argument("--phis", default="0.3,-0.2,0.5")
    check.add_argument("--quadrature-tol", type=float, default=1e-8)

    potts = commands.add_parser("potts", help="Модель Поттса")
    potts_actions = potts.add_subparsers(dest="action", required=True)
    potts_check = potts_actions.add_parser("check", parents=[common], help="Звезда–треугольник модели Поттса")
    potts_check.add_argument("--N", type=int, default=2)
    potts_check.add_argument("--c", type=float, default=1.0)
    potts_check.add_argument("--limit", action="store_true", help="Режим N→0")

    demo = commands.add_parser("demo", help="Демонстрации")
    demo_actions = demo.add_subparsers(dest="action", required=True)
    demo_inversion = demo_actions.add_parser("inversion", parents=[common, weights], help="Глобальная инверсия")
    demo_inversion.add_argument("--sizes", default="2,3,4,5")
    demo_inversion.add_argument("--p")
    demo_inversion.add_argument("--q")
    return parser


def build_run_config(args: argparse.Namespace, config: Config) -> RunConfig:
    """
    Объединяет аргументы командной строки с конфигурацией окружения.

    Флаги имеют приоритет над переменными YBX_*.

    Args:
        args: Разобранные аргументы
        config: Конфигурация окружения

    Returns:
        RunConfig: Параметры запуска
    """
    values = vars(args)
    subcommand = args.command if not values.get("action") else f"{args.command} {args.action}"
    inputs = [path for path in (values.get("weights"), values.get("input")) if path]
    options = {k: v for k, v in values.items() if k not in _COMMON_KEYS}
    return RunConfig(
        subcommand=subcommand,
        inputs=inputs,
        trials=10 if values.get("trials") is None else values["trials"],
        seed=config.seed if values.get("seed") is None else values["seed"],
        tol=config.tolerance if values.get("tol") is None else values["tol"],
        output=values.get("output"),
        jobs=config.jobs if values.get("jobs") is None else values["jobs"],
        fmt=values.get("format") or "json",
        options=options,
        rapidity_range=(config.rapidity_low, config.rapidity_high),
        max_states=config.max_states,
        derivative_step=values.get("derivative_step") or config.derivative_step,
        condition_limit=config.condition_limit,
        metrics_file=config.metrics_file if config.enable_performance_monitoring else None,
    )


# ---------------------------------------------------------------------------
# Вспомогательные функции
# ---------------------------------------------------------------------------

def _parse_list(text: str, convert=float) -> List:
    try:
        return [convert(item) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise UsageError(f"Не удалось разобрать список '{text}': {e}") from e


def parse_rapidity(text: Optional[str], default=None):
    """
    Быстрота из строки: "0.7" - скаляр, "0.7,0.2" - пара, "[...]" - JSON-запись вектора.
    """
    if text is None:
        return default
    text = text.strip()
    try:
        if text.startswith('['):
            return Rapidity.from_json(json.loads(text))
        if ',' in text:
            return tuple(Rapidity.scalar(parse_complex(v)) for v in text.split(','))
        return Rapidity.scalar(parse_complex(text))
    except (ValueError, json.JSONDecodeError) as e:
        raise UsageError(f"Некорректная быстрота '{text}': {e}") from e


def _slmn_states(weights) -> Optional[int]:
    if isinstance(weights, CheckerboardPair):
        weights = weights.plain
    return weights.Q if isinstance(weights, SlmnVertexFamily) else None


def _adapt(weights, value):
    """Скалярная быстрота превращается в вектор с единичными компонентами для весов sl(m|n)"""
    Q = _slmn_states(weights)
    if Q is None or (isinstance(value, Rapidity) and value.is_vector):
        return value
    return Rapidity.trivial(scalar_value(value), Q)


def _rapidity_json(value):
    if isinstance(value, tuple):
        return [_rapidity_json(v) for v in value]
    if isinstance(value, Rapidity):
        return value.to_json()
    return Rapidity.scalar(value).to_json()


def _load_weights(ctx: _RunContext):
    builtin = ctx.config.options.get("builtin")
    try:
        if builtin:
            return weights_from_dict(catalog_document(builtin))
        if not ctx.config.inputs:
            raise UsageError("Не задан файл весов (--weights или --builtin)")
        return load_weight_file(ctx.config.inputs[0])
    except (OSError, ValueError) as e:
        raise InputError(f"Не удалось загрузить веса: {e}") from e


def _load_net(ctx: _RunContext) -> ResistorNetwork:
    try:
        return load_netlist(ctx.config.inputs[0])
    except (OSError, ValueError) as e:
        raise InputError(f"Не удалось загрузить цепь: {e}") from e


def _vertex_family(weights) -> VertexWeightFamily:
    if not isinstance(weights, VertexWeightFamily):
        raise UsageError(f"Подкоманда требует вершинных весов, получено {type(weights).__name__}")
    return weights


def _check_record(report: ResidualReport, **extra) -> Dict[str, Any]:
    record = {"record": "check"}
    record.update(extra)
    record.update(report.to_dict())
    return record


def _error_record(error: Exception, **extra) -> Dict[str, Any]:
    record = {"record": "error"}
    record.update(extra)
    record.update({"error": type(error).__name__, "message": str(error)})
    return record


def _run_trial(ctx: _RunContext, index: int, triple: Tuple, check: Callable) -> List[Dict[str, Any]]:
    p, q, r = triple
    rapidities = {"trial": index + 1, "p": _rapidity_json(p), "q": _rapidity_json(q), "r": _rapidity_json(r)}
    try:
        return [_check_record(report, **rapidities) for report in check(p, q, r)]
    except YbxError as e:
        ctx.logger.log_error(e, {"subcommand": ctx.config.subcommand, "trial": index + 1})
        return [_error_record(e, **rapidities)]


def _trials(ctx: _RunContext, triples: Sequence[Tuple], check: Callable) -> Iterator[Dict[str, Any]]:
    tasks = [functools.partial(_run_trial, ctx, i, triple, check) for i, triple in enumerate(triples)]
    for records in ctx.run_ordered(tasks):
        yield from records


def _scalar_triples(ctx: _RunContext) -> List[Tuple]:
    low, high = ctx.config.rapidity_range
    return sample_rapidity_triples(ctx.rng, ctx.config.trials, low, high)


def _grid(ctx: _RunContext, points: int) -> List[float]:
    if points < 2:
        raise UsageError(f"Сетка должна содержать не менее двух точек, получено {points}")
    low, high = ctx.config.rapidity_range
    return [float(x) for x in np.linspace(low, high, points)]


# ---------------------------------------------------------------------------
# Подкоманды
# ---------------------------------------------------------------------------

def _catalog_list(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    for entry in describe_catalog():
        yield {"record": "catalog", **entry}


def _catalog_emit(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    name = ctx.option("name")
    document = catalog_document(name)
    target = ctx.option("to")
    if target:
        with open(target, 'w', encoding='utf-8') as f:
            json.dump(document, f, ensure_ascii=False, indent=2)
    yield {"record": "weights", "name": name, "output": target, "document": document}


def _verify(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    weights = _load_weights(ctx)
    tol = ctx.config.tol
    low, high = ctx.config.rapidity_range
    triples = sample_rapidity_triples(ctx.rng, ctx.config.trials, low, high, Q=_slmn_states(weights),
                                      random_gauge=bool(ctx.option("random_gauge", False)))
    if isinstance(weights, SpinWeightPair):
        transposed = bool(ctx.option("transposed", False))
        check = lambda p, q, r: verify_spin_star_triangle(weights, p, q, r, tol, transposed)
    elif isinstance(weights, CheckerboardPair):
        check = lambda p, q, r: verify_checkerboard(weights, p, q, r, tol)
    elif isinstance(weights, VertexWeightFamily):
        check = lambda p, q, r: [verify_vertex_ybe(weights, p, q, r, tol)]
    elif isinstance(weights, IrfVertexWeightFamily):
        check = lambda p, q, r: [verify_irf_vertex_ybe(weights, p, q, r, tol)]
    elif isinstance(weights, IrfWeightFamily):
        check = lambda p, q, r: [verify_irf_ybe(weights, p, q, r, tol)]
    else:
        raise UsageError(f"Нет проверки для весов {type(weights).__name__}")
    yield from _trials(ctx, triples, check)


def _convert_weights(weights, target: str):
    source = weights.plain if isinstance(weights, CheckerboardPair) else weights
    if target == "square-vertex" and isinstance(weights, SpinWeightPair):
        return square_weight_compose(weights)
    if target == "checkerboard-irf" and isinstance(weights, SpinWeightPair):
        return embed_spin_as_checkerboard_irf(weights)
    if target == "spin" and isinstance(source, IrfWeightFamily) and isinstance(weights, CheckerboardPair):
        return extract_spin_from_checkerboard_irf(weights)
    if target == "spin" and isinstance(source, VertexWeightFamily):
        return vertex_to_spin(weights)
    if target == "vertex" and isinstance(source, IrfVertexWeightFamily):
        return irf_vertex_to_vertex(weights)
    if target == "irf-vertex" and isinstance(source, IrfWeightFamily):
        return lift_irf_to_irf_vertex(weights)
    if target == "irf-vertex" and isinstance(source, VertexWeightFamily):
        return lift_vertex_to_irf_vertex(weights)
    kind = weights.kind
    raise UsageError(f"Преобразование {kind} → {target} не поддерживается")


def _convert(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    weights = _load_weights(ctx)
    target = ctx.option("into")
    converted = _convert_weights(weights, target)
    if target == "square-vertex":
        p = parse_rapidity(ctx.option("p"), (Rapidity.scalar(0.9), Rapidity.scalar(0.6)))
        q = parse_rapidity(ctx.option("q"), (Rapidity.scalar(0.5), Rapidity.scalar(0.2)))
        if not (isinstance(p, tuple) and isinstance(q, tuple)):
            raise UsageError("Квадратные веса табулируются на парах быстрот: --p p1,p2 --q q1,q2")
    else:
        p = _adapt(weights, parse_rapidity(ctx.option("p"), Rapidity.scalar(0.7)))
        q = _adapt(weights, parse_rapidity(ctx.option("q"), Rapidity.scalar(0.3)))
    target_path = ctx.option("to")
    save_weight_file(converted, target_path, p, q)
    yield {"record": "convert", "from": weights.kind, "to": target, "output": target_path,
           "p": _rapidity_json(p), "q": _rapidity_json(q)}


def _operators_ybe(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    omega = _vertex_family(_load_weights(ctx))
    kind, sites, tol = ctx.option("kind", "r-form"), ctx.option("sites", 3), ctx.config.tol

    def check(p, q, r):
        if kind != "difference":
            p, q, r = (_adapt(omega, x) for x in (p, q, r))
        return [check_matrix_ybe(kind, ybe_operators(kind, omega, p, q, r, sites), tol)]

    yield from _trials(ctx, _scalar_triples(ctx), check)


def _operators_transfer(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    omega = _vertex_family(_load_weights(ctx))
    cfg = ctx.config
    length = ctx.option("length", 3)
    grid = _grid(ctx, ctx.option("grid", 5))
    p = _adapt(omega, parse_rapidity(ctx.option("p"), Rapidity.scalar(cfg.rapidity_range[0])))
    tasks = [functools.partial(transfer_matrix, omega, length, p, _adapt(omega, q), cfg.max_states) for q in grid]
    matrices = [t.array for t in ctx.run_ordered(tasks)]
    for i in range(len(grid)):
        for j in range(i + 1, len(grid)):
            a, b = matrices[i], matrices[j]
            report = residual_report("transfer_commutation", a @ b, b @ a, cfg.tol)
            yield _check_record(report, length=length, q1=grid[i], q2=grid[j])
    if ctx.option("hamiltonian", False):
        family = transfer_family(omega, length, p, cfg.max_states)
        H = hamiltonian_from_family(family, p, cfg.derivative_step, cfg.condition_limit).array
        tol_h = ctx.option("hamiltonian_tol", 1e-7)
        for q, T in zip(grid, matrices):
            report = residual_report("hamiltonian_commutation", H @ T, T @ H, tol_h)
            yield _check_record(report, length=length, q=q)


def _operators_cybe(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    hbars = _parse_list(ctx.option("hbars", "1e-2,1e-3,1e-4"))
    if len(hbars) < 2:
        raise UsageError("Для оценки наклона нужно не менее двух значений ħ")
    factory = classical_six_vertex_family
    if ctx.config.inputs or ctx.option("builtin"):
        weights = _load_weights(ctx)
        if not isinstance(weights, SlmnVertexFamily):
            raise UsageError("Классическое семейство строится только из весов sl(m|n)")
        factory = functools.partial(classical_slmn_family, weights.params)
    table, slope = classical_convergence_study(factory, hbars=hbars, tol=ctx.config.tol)
    # Невязка при конечном ħ порядка ħ², строки таблицы не являются проверками
    for row in table.to_dict(orient="records"):
        yield {"record": "cybe_row", "hbar": row["hbar"], "residual_rel": row["cybe_residual"],
               "extraction_defect": row["extraction_defect"], "within_tol": bool(row["pass"])}
    min_slope = ctx.option("min_slope", 1.8)
    yield {"record": "check", "equation": "cybe_convergence", "slope": slope, "min_slope": min_slope,
           "pass": bool(slope >= min_slope)}


def _operators_reflection(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    omega = _vertex_family(_load_weights(ctx))
    mu = ctx.option("mu", 0.5)
    grid = _grid(ctx, ctx.option("grid", 10))
    solution = solve_diagonal_k(rcheck_difference_family(omega), mu, grid, tol=ctx.config.tol,
                                run_ordered=ctx.run_ordered)
    for p, k, residual in zip(solution.grid, solution.k, solution.residuals):
        yield {"record": "check", "equation": "reflection", "mu": mu, "p": p, "k": format_complex(k),
               "residual_rel": residual, "pass": bool(residual <= ctx.config.tol)}


def _operators_inversion(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    omega = _vertex_family(_load_weights(ctx))
    tol = ctx.config.tol

    def check(p, q, _r):
        p, q = _adapt(omega, p), _adapt(omega, q)
        c_pq, report = local_inversion(omega, p, q, tol)
        c_qp, _ = local_inversion(omega, q, p, tol)
        gap = abs(c_pq - c_qp)
        symmetric = gap <= tol * max(1.0, abs(c_pq))
        return [ResidualReport(report.equation, report.max_abs, report.relative, report.tolerance,
                               report.worst_index, report.scalar_R, None,
                               {"C_pq": c_pq, "C_qp": c_qp, "symmetry_gap": gap,
                                "symmetric": bool(symmetric)})]

    for record in _trials(ctx, _scalar_triples(ctx), check):
        if record["record"] == "check":
            record["pass"] = record["pass"] and record["details"]["symmetric"]
            del record["r"]
        yield record


def _demo_inversion(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    omega = _vertex_family(_load_weights(ctx))
    sizes = _parse_list(ctx.option("sizes", "2,3,4,5"), int)
    p = _adapt(omega, parse_rapidity(ctx.option("p"), Rapidity.scalar(0.7)))
    q = _adapt(omega, parse_rapidity(ctx.option("q"), Rapidity.scalar(0.3)))
    table = global_inversion_demo(omega, sizes, p, q, ctx.config.max_states, ctx.config.tol)
    for row in table.to_dict(orient="records"):
        yield {"record": "demo", **to_jsonable(row)}


def _net_solve(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    net = _load_net(ctx)
    solution = solve_kirchhoff(net)
    scale = max((abs(i) for _, _, i in solution.currents), default=1.0)
    increases = perturbed_power_increase(net, solution)
    record = {"record": "check", "equation": "kirchhoff_current_conservation"}
    record.update(solution.to_dict())
    record["min_power_increase"] = min(increases.values()) if increases else None
    record["pass"] = bool(solution.max_imbalance <= ctx.config.tol * max(1.0, scale))
    yield record


def _net_reduce(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    net = _load_net(ctx)
    terminals = ctx.option("terminals")
    if terminals:
        try:
            net = ResistorNetwork.from_graph(net.graph, _parse_list(terminals, str.strip), net.potentials)
        except NetlistError as e:
            raise UsageError(str(e)) from e
    reduced = reduce_network(net)
    target = ctx.option("to")
    if target:
        save_netlist(reduced, target)
    yield {"record": "netlist", "output": target, "netlist": netlist_to_dict(reduced)}
    pairs = [(a, b) for i, a in enumerate(net.terminals) for b in net.terminals[i + 1:]]
    if pairs:
        before = np.array([equivalent_impedance(net, a, b) for a, b in pairs])
        after = np.array([equivalent_impedance(reduced, a, b) for a, b in pairs])
        report = residual_report("reduction_equivalence", before, after, ctx.config.tol)
        yield _check_record(report, pairs=[list(pair) for pair in pairs])


def _net_equiv(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    net = _load_net(ctx)
    between = _parse_list(ctx.option("between"), str.strip)
    if len(between) != 2:
        raise UsageError("--between принимает ровно два узла")
    a, b = between
    yield {"record": "equivalent", "a": a, "b": b, "Z": format_complex(equivalent_impedance(net, a, b))}


def _gaussian_check(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    star = GaussianStar(ctx.option("beta", 1.0), tuple(_parse_list(ctx.option("legs", "1,2,3"))),
                        tuple(_parse_list(ctx.option("phis", "0.3,-0.2,0.5"))))
    for report in gaussian_star_triangle_check(star, ctx.config.tol, ctx.option("quadrature_tol", 1e-8)):
        yield _check_record(report)


def _potts_check(ctx: _RunContext) -> Iterator[Dict[str, Any]]:
    tol, c = ctx.config.tol, ctx.option("c", 1.0)
    if ctx.option("limit", False):
        params = PottsParams(0, c, limit=True)
        params.check()

        def check(p, q, r):
            p, q, r = scalar_value(p).real, scalar_value(q).real, scalar_value(r).real
            return [potts_limit_star_triangle_check(c, p, q, r, tol),
                    potts_rapidity_relation_check(params, p, q, r, tol)]
    else:
        params = PottsParams(ctx.option("N", 2), c)
        pair = potts_spin_weights(params)

        def check(p, q, r):
            return list(verify_spin_star_triangle(pair, p, q, r, tol)) + \
                [potts_rapidity_relation_check(params, p, q, r, tol)]

    yield from _trials(ctx, _scalar_triples(ctx), check)


HANDLERS: Dict[str, Callable[[_RunContext], Iterable[Dict[str, Any]]]] = {
    "catalog list": _catalog_list,
    "catalog emit": _catalog_emit,
    "verify": _verify,
    "convert": _convert,
    "operators ybe": _operators_ybe,
    "operators transfer": _operators_transfer,
    "operators cybe": _operators_cybe,
    "operators reflection": _operators_reflection,
    "operators inversion": _operators_inversion,
    "net solve": _net_solve,
    "net reduce": _net_reduce,
    "net equiv": _net_equiv,
    "gaussian check": _gaussian_check,
    "potts check": _potts_check,
    "demo inversion": _demo_inversion,
}


# ---------------------------------------------------------------------------
# Запуск
# ---------------------------------------------------------------------------

def _dumps(record: Dict[str, Any]) -> str:
    return json.dumps(to_jsonable(record), ensure_ascii=False)


def _render_table(records: List[Dict[str, Any]], stream: TextIO) -> None:
    header, body, summary = records[0], records[1:-1], records[-1]
    stream.write(f"# ybx {header['subcommand']} seed={header['seed']} tol={header['tol']}\n")
    if body:
        frame = pd.json_normalize([to_jsonable(r) for r in body])
        stream.write(frame.to_string(index=False) + "\n")
    stream.write(f"# passed={summary['passed']} failed={summary['failed']} errors={summary['errors']} "
                 f"pass={summary['pass']}\n")


class _Report:
    """Поток записей отчета с подсчетом итогов"""

    def __init__(self, stream: TextIO, fmt: str):
        self.stream = stream
        self.fmt = fmt
        self.records: List[Dict[str, Any]] = []
        self.passed = self.failed = self.errors = 0

    def emit(self, record: Dict[str, Any]) -> None:
        if record.get("record") == "error":
            self.errors += 1
        elif "pass" in record:
            if record["pass"]:
                self.passed += 1
            else:
                self.failed += 1
        if self.fmt == "json":
            self.stream.write(_dumps(record) + "\n")
        else:
            self.records.append(record)

    def close(self, config: RunConfig) -> Dict[str, Any]:
        summary = {"record": "summary", "subcommand": config.subcommand, "seed": config.seed,
                   "passed": self.passed, "failed": self.failed, "errors": self.errors,
                   "pass": self.failed == 0 and self.errors == 0}
        self.emit(summary)
        if self.fmt == "table":
            _render_table(self.records, self.stream)
        self.stream.flush()
        return summary


def run(config: RunConfig, logger: Optional[ILogger] = None, stream: Optional[TextIO] = None) -> int:
    """
    Выполняет подкоманду.

    Args:
        config: Параметры запуска
        logger: Логгер диагностики (по умолчанию - только stderr)
        stream: Поток отчета (по умолчанию stdout или файл config.output)

    Returns:
        int: Код завершения 0, 1, 2 или 3
    """
    logger = logger or Logger(log_file='')
    handler = HANDLERS.get(config.subcommand)
    if handler is None:
        logger.error(f"Неизвестная подкоманда '{config.subcommand}'")
        return EXIT_USAGE
    owned = None
    if stream is None:
        if config.output:
            try:
                owned = stream = open(config.output, 'w', encoding='utf-8')
            except OSError as e:
                logger.log_error(e, {"output": config.output})
                return EXIT_IO
        else:
            stream = sys.stdout

    container = ToolkitFactory.create_container(config, logger)
    queue = container.get("task_queue")
    monitor = container.get("performance_monitor")
    ctx = _RunContext(config, logger, np.random.default_rng(config.seed), queue.run_ordered)
    report = _Report(stream, config.fmt)
    report.emit({"record": "header", "tool": "ybx", "version": __version__, "subcommand": config.subcommand,
                 "seed": config.seed, "tol": config.tol, "trials": config.trials})
    status = None
    try:
        with monitor.measure(config.subcommand.replace(' ', '_')):
            for record in handler(ctx):
                report.emit(record)
    except (UsageError, ParameterError, RapidityFormError) as e:
        logger.log_error(e, {"subcommand": config.subcommand})
        status = EXIT_USAGE
    except (InputError, OSError) as e:
        logger.log_error(e, {"subcommand": config.subcommand})
        status = EXIT_IO
    except YbxError as e:
        logger.log_error(e, {"subcommand": config.subcommand})
        report.emit(_error_record(e))
    finally:
        logger.debug(f"Состояние сервисов: {container.get_health_report()}")
        container.shutdown_all()
        logger.flush()
    summary = report.close(config)
    if owned is not None:
        owned.close()
    if status is not None:
        return status
    return EXIT_OK if summary["pass"] else EXIT_FAILED


def cli_main(argv: Optional[Sequence[str]] = None, config: Optional[Config] = None,
             logger: Optional[ILogger] = None, stream: Optional[TextIO] = None) -> int:
    """
    Разбирает аргументы и выполняет подкоманду.

    Ошибки argparse завершают процесс с кодом 2 (SystemExit).
    """
    args = build_parser().parse_args(argv)
    config = config or Config()
    ok, problems = config.validate()
    logger = logger or Logger(log_file='')
    if not ok:
        for problem in problems:
            logger.error(f"Некорректная конфигурация: {problem}")
        return EXIT_USAGE
    try:
        run_config = build_run_config(args, config)
    except ParameterError as e:
        logger.log_error(e, {"subcommand": args.command})
        return EXIT_USAGE
    return run(run_config, logger, stream)
