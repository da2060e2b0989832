"""test files.py
"""
import numpy as np
import pytest

from coherent import files as F
from coherent import structure as S
from coherent.errors import SchemaError
from coherent.lifetime import Empirical, Weibull


def test_graph_system(fixture_path):
    """edge ids are the components"""
    phi = F.parse_system(F.load(fixture_path("gab.json")))
    assert phi.n == 9
    assert [sorted(s) for s in S.minimal_paths(phi)] == [[1, 3, 8], [2, 6, 9], [1, 4, 7, 8], [2, 5, 7, 8]]


def test_system_kinds(fixture_path):
    """formula without n, truth table with n"""
    assert S.equivalent(F.parse_system(F.load(fixture_path("series3.json"))), S.series(3))
    assert S.equivalent(F.parse_system(F.load(fixture_path("parallel3.json"))), S.parallel(3))
    assert S.equivalent(F.parse_system(F.load(fixture_path("series2.json"))), S.series(2))
    kofn = {"formula": {"op": "kofn", "k": 2, "args": [{"atom": 1}, {"atom": 2}, {"atom": 3}]}}
    assert S.equivalent(F.parse_system(kofn), S.k_out_of_n(2, 3))


def test_dump_system(fixture_path, gab):
    """dumped documents load back to equivalent structures"""
    birstruct = F.parse_system(F.load(fixture_path("birstruct.json")))
    for phi, kind in ((birstruct, "truth_table"), (birstruct, "minimal_paths"), (gab, "formula")):
        doc = F.dump_system(phi, kind)
        assert kind in doc and doc["n"] == phi.n
        assert S.equivalent(F.parse_system(doc), phi)
    assert F.dump_system(S.series(2), "truth_table")["truth_table"] == "0001"
    with pytest.raises(SchemaError):
        F.dump_system(gab, "graph")


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"n": 2, "truth_table": "0001", "minimal_paths": [[1, 2]]},
        {"formula": {"op": "xor", "args": [{"atom": 1}]}},
        {"formula": {"op": "and", "args": []}},
        {"formula": {"op": "kofn", "k": 3, "args": [{"atom": 1}, {"atom": 2}]}},
        {"formula": {"op": "and", "args": [{"atom": 0}]}},
        {"minimal_paths": [[1, 2]]},
        {"n": 2, "minimal_paths": [[1, "2"]]},
        {"n": 2, "truth_table": [0, 0, 0, 1]},
        {"n": True, "truth_table": "01"},
        [1, 2],
    ],
)
def test_system_schema_errors(doc):
    """each malformed system names where it went wrong"""
    with pytest.raises(SchemaError) as err:
        F.parse_system(doc)
    assert err.value.where.startswith("system")


def test_graph_schema_errors():
    """duplicate or gapped edge ids"""
    edge = lambda k, a, b: {"id": k, "from": a, "to": b}
    graph = {"nodes": ["A", "B"], "source": "A", "target": "B"}
    with pytest.raises(SchemaError, match="duplicate"):
        F.parse_system({"graph": {**graph, "edges": [edge(1, "A", "B"), edge(1, "A", "B")]}})
    with pytest.raises(SchemaError, match="exactly 1..n"):
        F.parse_system({"graph": {**graph, "edges": [edge(1, "A", "B"), edge(3, "A", "B")]}})


def test_json_position():
    """syntax errors carry source, line and column"""
    with pytest.raises(SchemaError) as err:
        F.loads('{\n  "n": 2,\n  oops\n}', source="broken.json")
    assert err.value.where == "broken.json:3:3"


def test_lifetimes(fixture_path):
    """all three distribution kinds"""
    model = F.parse_lifetimes(F.load(fixture_path("birstruct_lifetimes.json")))
    assert len(model) == 5
    assert model[2] == Weibull(2.0, 1.5)
    assert isinstance(model[3], Empirical)


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"1": {"kind": "exponential", "rate": 1.0}, "3": {"kind": "exponential", "rate": 1.0}},
        {"1": {"kind": "gamma", "rate": 1.0}},
        {"1": {"kind": "weibull", "shape": 2.0}},
        {"1": {"kind": "empirical", "times": [0, 1], "survival": "fast"}},
    ],
)
def test_lifetime_schema_errors(doc):
    """ids 1..n and known distribution kinds"""
    with pytest.raises(SchemaError):
        F.parse_lifetimes(doc)


def test_game(fixture_path):
    """labels, nested matrices and the aggregate"""
    game = F.parse_game(F.load(fixture_path("desk.json")))
    assert game.states == ("calm", "busy") and game.players == ("front", "back")
    assert game.horizon == 2 and game.sense == "minimize"
    assert game.payoff.tolist() == [[2, 8], [3, 1]]
    assert S.equivalent(game.aggregate, S.parallel(2))


def test_flat_transition(fixture_path):
    """a row-major list is reshaped to m x m; counts become labels"""
    game = F.parse_game(F.load(fixture_path("symmetric.json")))
    assert game.states == ("1", "2", "3") and game.players == ("1", "2")
    assert np.allclose(game.transition[1], [0.2, 0.5, 0.3])


@pytest.mark.parametrize(
    "change",
    [
        {"payoff": [[2, 8, 1], [3, 1, 1]]},
        {"transition": [0.6, 0.4, 0.3]},
        {"aggregate": {"formula": {"op": "or", "args": [{"atom": 1}, {"atom": 2}, {"atom": 3}]}}},
        {"initial_distribution": [1.0]},
        {"sense": "sideways"},
        {"players": ["front", "front"]},
        {"horizon": 0},
    ],
)
def test_game_schema_errors(fixture_path, change):
    """shapes are checked against the declared states and players"""
    doc = {**F.load(fixture_path("desk.json")), **change}
    with pytest.raises(SchemaError):
        F.parse_game(doc)
