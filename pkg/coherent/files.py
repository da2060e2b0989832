"""JSON definition files: systems, component lifetimes and stopping games

System (exactly one of):
  {"formula": {"op": "and"|"or"|"kofn", "k": 2, "args": [{"atom": 1}, ...]}, "n"?: int}
  {"minimal_paths": [[1, 3, 8], ...], "n": int}
  {"truth_table": "0001", "n": int}   (character k is phi at state index k,
                                        component 1 = least significant bit)
  {"graph": {"nodes": [...], "edges": [{"id": 1, "from": "A", "to": "C"}, ...],
             "source": "A", "target": "B"}}   (edge ids are components 1..n)
Lifetimes:
  {"1": {"kind": "exponential", "rate": 1.0},
   "2": {"kind": "weibull", "shape": 2.0, "scale": 1.5},
   "3": {"kind": "empirical", "times": [0, 1, 2], "survival": [1, 0.4, 0]}}
Game:
  {"states": 2 | ["ok", "worn"], "transition": [[...], ...] (or row-major flat),
   "horizon": 3, "players": 2 | ["a", "b"], "payoff": [[...]], "cost": [[...]],
   "aggregate": <system>, "initial_distribution": [...], "sense"?: "minimize"|"maximize"}
"""
import json
import typing as T

import numpy as np

from .errors import SchemaError
from .lifetime import Distribution, Empirical, Exponential, LifetimeModel, Weibull
from .structure import (
    And,
    Atom,
    Formula,
    FormulaBackend,
    KOutOfN,
    Or,
    StructureFunction,
    from_formula,
    from_minimal_paths,
    from_truth_table,
    from_two_terminal_graph,
)
from .voting import SENSES, StoppingGame

SYSTEM_KINDS = ("formula", "minimal_paths", "truth_table", "graph")
DUMP_KINDS = ("formula", "minimal_paths", "truth_table")


def loads(text: str, source: str = "<string>") -> T.Any:
    """json.loads with file:line:column diagnostics"""
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"{source}:{err.lineno}:{err.colno}", err.msg) from err


def load(path: str) -> T.Any:
    """reads and parses one JSON file"""
    with open(path, encoding="utf-8") as file:
        return loads(file.read(), source=path)


def _get(doc: T.Any, key: str, where: str, default: T.Any = ...) -> T.Any:
    if not isinstance(doc, dict):
        raise SchemaError(where, "expected an object")
    if key not in doc:
        if default is ...:
            raise SchemaError(where, f"missing field {key!r}")
        return default
    return doc[key]


def _int(value: T.Any, where: str, low: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < low:
        raise SchemaError(where, f"expected an integer >= {low}, got {value!r}")
    return value


def _number(value: T.Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(where, f"expected a number, got {value!r}")
    return float(value)


def _list(value: T.Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(where, f"expected a list, got {type(value).__name__}")
    return value


def _matrix(value: T.Any, rows: int, cols: int, where: str) -> np.ndarray:
    flat = _list(value, where)
    if flat and all(isinstance(row, list) for row in flat):
        cells = [_number(v, f"{where}[{r}][{c}]") for r, row in enumerate(flat) for c, v in enumerate(row)]
        if len(flat) != rows or any(len(row) != cols for row in flat):
            raise SchemaError(where, f"expected {rows} rows of {cols} numbers")
    else:
        cells = [_number(v, f"{where}[{k}]") for k, v in enumerate(flat)]
        if len(cells) != rows * cols:
            raise SchemaError(where, f"expected {rows}x{cols} = {rows * cols} numbers, got {len(cells)}")
    return np.array(cells, dtype=float).reshape(rows, cols)


### Systems


def parse_formula(node: T.Any, where: str = "formula") -> Formula:
    """nested {"op", "k"?, "args"} objects with {"atom": i} leaves"""
    if isinstance(node, dict) and "atom" in node:
        return Atom(_int(node["atom"], f"{where}.atom"))
    op = _get(node, "op", where)
    args = _list(_get(node, "args", where), f"{where}.args")
    children = tuple(parse_formula(a, f"{where}.args[{k}]") for k, a in enumerate(args))
    if not children:
        raise SchemaError(f"{where}.args", "needs at least one argument")
    if op == "and":
        return And(children)
    if op == "or":
        return Or(children)
    if op == "kofn":
        k = _int(_get(node, "k", where), f"{where}.k")
        if k > len(children):
            raise SchemaError(f"{where}.k", f"k={k} exceeds {len(children)} arguments")
        return KOutOfN(k, children)
    raise SchemaError(f"{where}.op", f"expected and|or|kofn, got {op!r}")


def parse_system(doc: T.Any, where: str = "system") -> StructureFunction:
    """StructureFunction from one of the four system forms"""
    if not isinstance(doc, dict):
        raise SchemaError(where, "expected an object")
    given = [kind for kind in SYSTEM_KINDS if kind in doc]
    if len(given) != 1:
        raise SchemaError(where, f"needs exactly one of {', '.join(SYSTEM_KINDS)}, got {given or 'none'}")
    kind = given[0]
    if kind == "formula":
        formula = parse_formula(doc["formula"], f"{where}.formula")
        n = doc.get("n")
        return from_formula(formula, None if n is None else _int(n, f"{where}.n"))
    if kind == "graph":
        return _parse_graph(doc["graph"], f"{where}.graph")
    n = _int(_get(doc, "n", where), f"{where}.n")
    if kind == "minimal_paths":
        family = _list(doc["minimal_paths"], f"{where}.minimal_paths")
        sets = [
            [_int(i, f"{where}.minimal_paths[{k}]") for i in _list(s, f"{where}.minimal_paths[{k}]")]
            for k, s in enumerate(family)
        ]
        return from_minimal_paths(n, sets)
    bits = doc["truth_table"]
    if not isinstance(bits, str):
        raise SchemaError(f"{where}.truth_table", "expected a bit string")
    return from_truth_table(n, bits)


def _parse_graph(doc: T.Any, where: str) -> StructureFunction:
    nodes = _list(_get(doc, "nodes", where), f"{where}.nodes")
    edges = _list(_get(doc, "edges", where), f"{where}.edges")
    by_id: T.Dict[int, T.Tuple[T.Any, T.Any]] = {}
    for k, edge in enumerate(edges):
        at = f"{where}.edges[{k}]"
        key = _int(_get(edge, "id", at), f"{at}.id")
        if key in by_id:
            raise SchemaError(f"{at}.id", f"duplicate edge id {key}")
        by_id[key] = (_get(edge, "from", at), _get(edge, "to", at))
    if sorted(by_id) != list(range(1, len(by_id) + 1)):
        raise SchemaError(f"{where}.edges", "edge ids must be exactly 1..n")
    ordered = [by_id[key] for key in range(1, len(by_id) + 1)]
    return from_two_terminal_graph(nodes, ordered, _get(doc, "source", where), _get(doc, "target", where))


def _formula_doc(node: Formula) -> dict:
    if isinstance(node, Atom):
        return {"atom": node.index}
    args = [_formula_doc(c) for c in node.children]
    if isinstance(node, KOutOfN):
        return {"op": "kofn", "k": node.k, "args": args}
    return {"op": "and" if isinstance(node, And) else "or", "args": args}


def dump_system(phi: StructureFunction, kind: str = "minimal_paths") -> dict:
    """a system document of the given kind that loads back to an equivalent structure"""
    if kind == "formula":
        if isinstance(phi.backend, FormulaBackend):
            formula = phi.backend.formula
        else:
            if not phi.paths:
                raise SchemaError("system", "a structure that never works has no formula")
            formula = Or(tuple(And(tuple(Atom(i) for i in sorted(s))) for s in phi.paths))
        return {"n": phi.n, "formula": _formula_doc(formula)}
    if kind == "minimal_paths":
        return {"n": phi.n, "minimal_paths": [sorted(s) for s in phi.paths]}
    if kind == "truth_table":
        return {"n": phi.n, "truth_table": "".join("1" if b else "0" for b in phi.table)}
    raise SchemaError("kind", f"expected one of {', '.join(DUMP_KINDS)}, got {kind!r}")


### Lifetimes


def _distribution(doc: T.Any, where: str) -> Distribution:
    kind = _get(doc, "kind", where)
    if kind == "exponential":
        return Exponential(_number(_get(doc, "rate", where), f"{where}.rate"))
    if kind == "weibull":
        shape = _number(_get(doc, "shape", where), f"{where}.shape")
        return Weibull(shape, _number(_get(doc, "scale", where), f"{where}.scale"))
    if kind == "empirical":
        times = _list(_get(doc, "times", where), f"{where}.times")
        survival = _list(_get(doc, "survival", where), f"{where}.survival")
        return Empirical(
            tuple(_number(t, f"{where}.times[{k}]") for k, t in enumerate(times)),
            tuple(_number(s, f"{where}.survival[{k}]") for k, s in enumerate(survival)),
        )
    raise SchemaError(f"{where}.kind", f"expected exponential|weibull|empirical, got {kind!r}")


def parse_lifetimes(doc: T.Any, where: str = "lifetimes") -> LifetimeModel:
    """LifetimeModel from a map of component ids "1".."n" to distributions"""
    if not isinstance(doc, dict) or not doc:
        raise SchemaError(where, "expected a non-empty object keyed by component id")
    expected = [str(i) for i in range(1, len(doc) + 1)]
    if sorted(doc, key=lambda k: (len(k), k)) != expected:
        raise SchemaError(where, f"component ids must be exactly 1..{len(doc)}, got {sorted(doc)}")
    return LifetimeModel(tuple(_distribution(doc[k], f"{where}.{k}") for k in expected))


### Games


def _labels(value: T.Any, where: str) -> T.Tuple[str, ...]:
    if isinstance(value, list):
        if not value or len(set(map(str, value))) != len(value):
            raise SchemaError(where, "labels must be non-empty and distinct")
        return tuple(str(v) for v in value)
    return tuple(str(k) for k in range(1, _int(value, where) + 1))


def parse_game(doc: T.Any, where: str = "game") -> StoppingGame:
    """StoppingGame with shapes checked against states and players"""
    states = _labels(_get(doc, "states", where), f"{where}.states")
    players = _labels(_get(doc, "players", where), f"{where}.players")
    m, p = len(states), len(players)
    aggregate = parse_system(_get(doc, "aggregate", where), f"{where}.aggregate")
    if aggregate.n != p:
        raise SchemaError(f"{where}.aggregate", f"aggregates {aggregate.n} inputs, game has {p} players")
    initial = _list(_get(doc, "initial_distribution", where), f"{where}.initial_distribution")
    if len(initial) != m:
        raise SchemaError(f"{where}.initial_distribution", f"expected {m} probabilities")
    sense = _get(doc, "sense", where, "minimize")
    if sense not in SENSES:
        raise SchemaError(f"{where}.sense", f"expected minimize|maximize, got {sense!r}")
    return StoppingGame(
        transition=_matrix(_get(doc, "transition", where), m, m, f"{where}.transition"),
        horizon=_int(_get(doc, "horizon", where), f"{where}.horizon"),
        payoff=_matrix(_get(doc, "payoff", where), p, m, f"{where}.payoff"),
        cost=_matrix(_get(doc, "cost", where), p, m, f"{where}.cost"),
        aggregate=aggregate,
        initial=np.array([_number(v, f"{where}.initial_distribution[{k}]") for k, v in enumerate(initial)]),
        sense=sense,
        states=states,
        players=players,
    )
