"""
Файлы весов (JSON) и каталог встроенных решений.

Формат файла:
{"kind": ..., "Q": int, "Qf": int?, "Qwhite": int?,
 "source": {"builtin": {"name": "slmn"|"potts", "params": {...}}}
         | {"table": {"p": rap, "q": rap, "data": [...], "data_barred": [...]?}}}

Комплексные числа записываются парами [re, im] или строками "a+bi".
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.errors import ExtentMismatchError, NonFiniteValueError, WeightFileError, WeightFileSchemaError
from src.tensor_core import DenseTensor, format_complex, parse_complex
from src.weight_models import (CheckerboardPair, IrfVertexWeightFamily, IrfWeightFamily, PottsParams,
                               PottsSpinPair, Rapidity, SlmnParams, SlmnVertexFamily, SpinWeightPair,
                               VertexWeightFamily, WeightFamily, potts_spin_weights, slmn_vertex_weight)

logger = logging.getLogger(__name__)

KINDS = ("vertex", "spin", "irf", "irf-vertex", "checkerboard-vertex", "checkerboard-irf",
         "checkerboard-irf-vertex")

_FAMILY_TYPES = {"vertex": VertexWeightFamily, "irf": IrfWeightFamily, "irf-vertex": IrfVertexWeightFamily}


# ---------------------------------------------------------------------------
# Параметры встроенных решений
# ---------------------------------------------------------------------------

def _slmn_params_to_json(params: SlmnParams) -> Dict[str, Any]:
    return {
        "m": params.m,
        "n": params.n,
        "eta": format_complex(params.eta),
        "G": [[format_complex(v) for v in row] for row in params.G],
        "norm": format_complex(params.norm),
        "epsilon": list(params.epsilon),
        "norm_rule": params.norm_rule,
    }


def _slmn_params_from_json(data: Dict[str, Any]) -> SlmnParams:
    try:
        G = data.get("G")
        if G is not None:
            G = [[parse_complex(v) for v in row] for row in G]
        return SlmnParams.build(int(data["m"]), int(data["n"]), data["eta"], G=G,
                                norm=data.get("norm", 1.0), epsilon=data.get("epsilon"),
                                norm_rule=data.get("norm_rule", "constant"))
    except KeyError as e:
        raise WeightFileSchemaError(f"В параметрах sl(m|n) отсутствует поле {e}") from e
    except (TypeError, ValueError) as e:
        if isinstance(e, WeightFileError):
            raise
        raise WeightFileSchemaError(f"Некорректные параметры sl(m|n): {e}") from e


def _potts_params_to_json(params: PottsParams) -> Dict[str, Any]:
    return {"N": params.N, "c": params.c, "limit": params.limit}


def _potts_params_from_json(data: Dict[str, Any]) -> PottsParams:
    try:
        return PottsParams(N=data["N"], c=float(data.get("c", 1.0)), limit=bool(data.get("limit", False)))
    except KeyError as e:
        raise WeightFileSchemaError(f"В параметрах Поттса отсутствует поле {e}") from e


# ---------------------------------------------------------------------------
# Таблицы
# ---------------------------------------------------------------------------

def _parse_table(data, extents: Tuple[int, ...], label: str) -> np.ndarray:
    if data is None:
        raise WeightFileSchemaError(f"Отсутствует таблица {label}")
    try:
        raw = np.array(data, dtype=object)
    except ValueError as e:
        raise ExtentMismatchError(f"Таблица {label} имеет неровную форму: {e}") from e
    expected = int(np.prod(extents))
    try:
        if raw.shape == extents + (2,):
            values = [parse_complex(list(pair)) for pair in raw.reshape(-1, 2)]
        elif raw.shape == extents:
            values = [parse_complex(v) for v in raw.reshape(-1)]
        else:
            values = None
    except NonFiniteValueError:
        raise
    except ValueError as e:
        raise WeightFileSchemaError(f"Таблица {label}: {e}") from e
    if values is None:
        size = raw.size // 2 if raw.ndim and raw.shape[-1] == 2 else raw.size
        raise ExtentMismatchError(
            f"Таблица {label}: размерности {raw.shape} не соответствуют {extents} ({size} значений вместо {expected})")
    return DenseTensor(values, extents).data


def _table_extents(kind: str, doc: Dict[str, Any]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    Q = doc["Q"]
    Qf = int(doc.get("Qf", Q))
    Qw = int(doc.get("Qwhite", Qf if kind.endswith("irf-vertex") else Q))
    if kind in ("vertex", "checkerboard-vertex"):
        plain = (Q,) * 4
        return plain, plain
    if kind == "spin":
        return (Q, Q), (Q, Q)
    if kind in ("irf", "checkerboard-irf"):
        return (Q, Qw, Q, Qw), (Qw, Q, Qw, Q)
    return (Q,) * 4 + (Qf, Qw, Qf, Qw), (Q,) * 4 + (Qw, Qf, Qw, Qf)


def _rapidity_from_json(value):
    if value is None:
        return None
    # парные быстроты составного семейства
    if isinstance(value, dict) and "pair" in value:
        return tuple(Rapidity.from_json(v) for v in value["pair"])
    return Rapidity.from_json(value)


def _table_weights(kind: str, doc: Dict[str, Any], table: Dict[str, Any]):
    plain_extents, barred_extents = _table_extents(kind, doc)
    p, q = _rapidity_from_json(table.get("p")), _rapidity_from_json(table.get("q"))
    data = _parse_table(table.get("data"), plain_extents, "data")
    if kind == "spin":
        barred = _parse_table(table.get("data_barred"), barred_extents, "data_barred")
        return SpinWeightPair.tabulated(data, barred, p, q)
    base = kind.replace("checkerboard-", "")
    family_type = _FAMILY_TYPES[base]
    plain = family_type.tabulated(data, p, q)
    if not kind.startswith("checkerboard-"):
        return plain
    barred_data = table.get("data_barred")
    barred = plain if barred_data is None else family_type.tabulated(
        _parse_table(barred_data, barred_extents, "data_barred"), p, q)
    return CheckerboardPair(plain, barred)


def _builtin_weights(kind: str, doc: Dict[str, Any], builtin: Dict[str, Any]):
    name = builtin.get("name")
    params = builtin.get("params") or {}
    if name == "slmn":
        slmn = _slmn_params_from_json(params)
        if slmn.Q != doc["Q"]:
            raise WeightFileSchemaError(f"Q={doc['Q']} не равно m+n={slmn.Q}")
        family = slmn_vertex_weight(slmn)
        if kind == "vertex":
            return family
        if kind == "checkerboard-vertex":
            return CheckerboardPair.uniform(family)
        raise WeightFileSchemaError(f"Решение sl(m|n) имеет вид vertex, указано {kind}")
    if name == "potts":
        potts = _potts_params_from_json(params)
        if kind != "spin":
            raise WeightFileSchemaError(f"Решение Поттса имеет вид spin, указано {kind}")
        pair = potts_spin_weights(potts)
        if pair.Q != doc["Q"]:
            raise WeightFileSchemaError(f"Q={doc['Q']} не равно N={pair.Q}")
        return pair
    raise WeightFileSchemaError(f"Неизвестное встроенное решение '{name}'")


def weights_from_dict(doc: Dict[str, Any]):
    """
    Создает семейство или пару весов из словаря формата файла весов.

    Args:
        doc: Разобранный JSON

    Returns:
        WeightFamily, SpinWeightPair или CheckerboardPair
    """
    if not isinstance(doc, dict):
        raise WeightFileSchemaError("Файл весов должен быть JSON-объектом")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise WeightFileSchemaError(f"Неизвестный вид весов '{kind}', допустимы {KINDS}")
    Q = doc.get("Q")
    if not isinstance(Q, int) or isinstance(Q, bool) or Q < 1:
        raise WeightFileSchemaError(f"Q должно быть положительным целым, получено {Q!r}")
    for key in ("Qf", "Qwhite"):
        value = doc.get(key)
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
            raise WeightFileSchemaError(f"{key} должно быть положительным целым, получено {value!r}")
    source = doc.get("source")
    if not isinstance(source, dict) or len(source) != 1:
        raise WeightFileSchemaError("Поле source должно содержать ровно один из ключей builtin или table")
    if "builtin" in source:
        return _builtin_weights(kind, doc, source["builtin"])
    if "table" in source:
        return _table_weights(kind, doc, source["table"])
    raise WeightFileSchemaError(f"Неизвестный источник весов {list(source)}")


def load_weight_file(path: str):
    """
    Читает файл весов.

    Args:
        path: Путь к JSON-файлу

    Returns:
        WeightFamily, SpinWeightPair или CheckerboardPair
    """
    with open(path, 'r', encoding='utf-8') as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise WeightFileError(f"Файл {path} не является корректным JSON: {e}") from e
    weights = weights_from_dict(doc)
    logger.debug(f"Загружены веса {doc['kind']} из {path}")
    return weights


# ---------------------------------------------------------------------------
# Запись
# ---------------------------------------------------------------------------

def _rapidity_to_json(value):
    if value is None:
        return None
    if isinstance(value, tuple):
        return {"pair": [_rapidity_to_json(v) for v in value]}
    if isinstance(value, Rapidity):
        return value.to_json()
    return Rapidity.scalar(value).to_json()


def _table_source(source: Dict[str, Any], barred_source: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    table = source["table"]
    record = {"p": _rapidity_to_json(table.get("p")), "q": _rapidity_to_json(table.get("q")),
              "data": table["data"].to_nested()}
    if "data_barred" in table:
        record["data_barred"] = table["data_barred"].to_nested()
    if barred_source is not None:
        record["data_barred"] = barred_source["table"]["data"].to_nested()
    return {"table": record}


def _tabulate(weights, p, q):
    if isinstance(weights, SpinWeightPair):
        return SpinWeightPair.tabulated(weights.evaluate_w(p, q), weights.evaluate_wbar(p, q), p, q)
    if isinstance(weights, CheckerboardPair):
        return CheckerboardPair(_tabulate(weights.plain, p, q), _tabulate(weights.barred, p, q))
    return _FAMILY_TYPES[weights.kind].tabulated(weights.evaluate(p, q), p, q)


def _extent_fields(family) -> Dict[str, Any]:
    if isinstance(family, VertexWeightFamily):
        return {"Q": family.Q}
    faces = family.face_extents
    if faces != (faces[0], faces[1], faces[0], faces[1]):
        raise WeightFileError(f"Размерности граней {faces} не записываются через Q и Qwhite")
    if isinstance(family, IrfWeightFamily):
        fields = {"Q": faces[0]}
        if faces != (faces[0],) * 4:
            fields["Qwhite"] = faces[1]
        return fields
    fields = {"Q": family.Qe, "Qf": faces[0]}
    if faces != (faces[0],) * 4:
        fields["Qwhite"] = faces[1]
    return fields


def weights_to_dict(weights, p=None, q=None) -> Dict[str, Any]:
    """
    Словарь формата файла весов.

    Встроенные решения записываются по имени и параметрам. Производные
    семейства без происхождения табулируются при быстротах p, q.
    """
    if isinstance(weights, SlmnVertexFamily):
        return {"kind": "vertex", "Q": weights.Q,
                "source": {"builtin": {"name": "slmn", "params": _slmn_params_to_json(weights.params)}}}
    if isinstance(weights, PottsSpinPair):
        return {"kind": "spin", "Q": weights.Q,
                "source": {"builtin": {"name": "potts", "params": _potts_params_to_json(weights.params)}}}
    if isinstance(weights, CheckerboardPair):
        plain, barred = weights.plain, weights.barred
        if plain is barred and isinstance(plain, SlmnVertexFamily):
            doc = weights_to_dict(plain)
            doc["kind"] = "checkerboard-vertex"
            return doc
        if plain.source is None or barred.source is None or "table" not in plain.source \
                or "table" not in barred.source:
            if p is None or q is None:
                raise WeightFileError("Шахматная пара без табличного происхождения: укажите p и q для табулирования")
            return weights_to_dict(_tabulate(weights, p, q))
        doc = {"kind": weights.kind}
        doc.update(_extent_fields(plain))
        doc["source"] = _table_source(plain.source, barred.source)
        return doc
    source = getattr(weights, "source", None)
    if source is None or "table" not in source:
        if p is None or q is None:
            raise WeightFileError("Семейство без табличного происхождения: укажите p и q для табулирования")
        return weights_to_dict(_tabulate(weights, p, q))
    if isinstance(weights, SpinWeightPair):
        doc = {"kind": "spin", "Q": weights.Q}
    elif isinstance(weights, WeightFamily):
        doc = {"kind": weights.kind}
        doc.update(_extent_fields(weights))
    else:
        raise WeightFileError(f"Неподдерживаемый тип весов: {type(weights).__name__}")
    doc["source"] = _table_source(source)
    return doc


def save_weight_file(weights, path: str, p=None, q=None) -> None:
    """
    Записывает веса в JSON-файл.

    Args:
        weights: Семейство, спиновая или шахматная пара
        path: Путь к файлу
        p, q: Быстроты табулирования для производных семейств
    """
    doc = weights_to_dict(weights, p, q)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(doc, f, ensure_ascii=False, indent=2)
    logger.debug(f"Веса {doc['kind']} записаны в {path}")


# ---------------------------------------------------------------------------
# Каталог
# ---------------------------------------------------------------------------

def _slmn_entry(m: int, n: int, eta) -> Dict[str, Any]:
    return weights_to_dict(slmn_vertex_weight(SlmnParams.unit_at_equal(m, n, eta)))


def _potts_entry(N: int) -> Dict[str, Any]:
    return weights_to_dict(potts_spin_weights(PottsParams(N)))


CATALOG: Dict[str, Tuple[str, Any]] = {
    "slmn02": ("Шестивершинная модель sl(0|2), η = 0.4, Ř(p,p) = 1", lambda: _slmn_entry(0, 2, 0.4)),
    "slmn03": ("Модель sl(0|3), η = 0.4, Ř(p,p) = 1", lambda: _slmn_entry(0, 3, 0.4)),
    "slmn11": ("Модель sl(1|1), η = 0.4, Ř(p,p) = 1", lambda: _slmn_entry(1, 1, 0.4)),
    "slmn21": ("Модель sl(2|1), η = 0.4, Ř(p,p) = 1", lambda: _slmn_entry(2, 1, 0.4)),
    "six-vertex-free-fermion": ("Шестивершинная модель в точке свободных фермионов, η = iπ/2",
                                lambda: _slmn_entry(0, 2, complex(0, np.pi / 2))),
    "potts2": ("Модель Поттса N = 2", lambda: _potts_entry(2)),
    "potts3": ("Модель Поттса N = 3", lambda: _potts_entry(3)),
    "classical-six-vertex": ("Классическое семейство sl(0|2) при ħ = 0.01, R(ħ=0) = 1",
                             lambda: weights_to_dict(slmn_vertex_weight(SlmnParams.classical(0.01)))),
}


def catalog_names() -> List[str]:
    return list(CATALOG)


def catalog_document(name: str) -> Dict[str, Any]:
    """Словарь файла весов для встроенного решения из каталога"""
    if name not in CATALOG:
        raise WeightFileSchemaError(f"Решения '{name}' нет в каталоге, доступны {catalog_names()}")
    return CATALOG[name][1]()


def describe_catalog() -> List[Dict[str, Any]]:
    """Записи каталога: имя, вид, Q и описание"""
    entries = []
    for name, (description, build) in CATALOG.items():
        doc = build()
        entries.append({"name": name, "kind": doc["kind"], "Q": doc["Q"], "description": description})
    return entries
