"""test reliability.py
"""
import importlib

import numpy as np
import pytest

from coherent import structure as S
from coherent.errors import DimensionError, InputError

from .conftest import all_vectors, random_systems

# coherent/__init__ re-exports the function `reliability`, shadowing the submodule
R = importlib.import_module("coherent.reliability")

P3 = (0.95, 0.99, 0.96)


def brute_force(phi: S.StructureFunction, p) -> float:
    """sum of phi(x) P{X = x} over every state"""
    p = np.asarray(p, dtype=float)
    total = 0.0
    for x in all_vectors(phi.n):
        if phi(x):
            v = np.asarray(x)
            total += float(np.prod(np.where(v == 1, p, 1.0 - p)))
    return total


def test_series_values():
    """h and Birnbaum importance of a series system"""
    phi = S.series(3)
    assert R.reliability(phi, P3) == pytest.approx(0.90288, abs=1e-12)
    report = R.birnbaum_all(phi, P3)
    assert report.values == pytest.approx((0.9504, 0.912, 0.9405), abs=1e-12)
    assert report.ranking() == [1, 3, 2]


def test_parallel_values():
    """h and Birnbaum importance of a parallel system"""
    phi = S.parallel(3)
    assert R.reliability(phi, P3) == pytest.approx(0.99998, abs=1e-12)
    assert R.birnbaum_all(phi, P3).values == pytest.approx((0.0004, 0.002, 0.0005), abs=1e-12)


@pytest.mark.parametrize("phi", random_systems(50, 12, seed=11))
def test_against_enumeration(phi):
    """pivotal decomposition matches 2^n enumeration"""
    p = np.random.default_rng(phi.n).uniform(0.05, 0.95, phi.n)
    expected = brute_force(phi, p)
    assert R.reliability(phi, p) == pytest.approx(expected, abs=1e-12)
    assert R.reliability_from_cuts(phi, p) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("phi", random_systems(20, 6, seed=12))
def test_simple_form_path(phi):
    """once the simple form is cached, h is read off it"""
    p = np.linspace(0.1, 0.9, phi.n)
    expected = brute_force(phi, p)
    S.simple_form(phi)
    assert phi.cached("form")
    assert R.reliability(phi, p) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("phi", random_systems(20, 6, seed=13))
def test_birnbaum_is_derivative(phi):
    """B(i|p) equals the partial derivative of the simple form"""
    p = np.linspace(0.2, 0.8, phi.n)
    form = S.simple_form(phi)
    for i in range(1, phi.n + 1):
        assert R.birnbaum(phi, p, i) == pytest.approx(form.derivative(i).evaluate(p), abs=1e-12)


def test_gab_half(gab):
    """the bridge-like network at p = 1/2 agrees both ways"""
    half = [0.5] * 9
    assert R.reliability(gab, half) == pytest.approx(brute_force(gab, half), abs=1e-12)
    assert R.reliability_from_cuts(gab, half) == pytest.approx(R.reliability(gab, half), abs=1e-12)


def test_compound_importance(birstruct):
    """functioning and failure parts sum to the Birnbaum importance"""
    p = [0.9, 0.8, 0.5, 0.6, 0.7]
    for i in range(1, 6):
        split = R.compound_reliability_importance(birstruct, p, i)
        assert split.functioning + split.failure == pytest.approx(split.total, abs=1e-12)
        assert split.total == pytest.approx(R.birnbaum(birstruct, p, i), abs=1e-12)


def test_compound_importance_degenerate():
    """h = 1 leaves the conditional parts undefined"""
    with pytest.warns(UserWarning, match="undefined"):
        split = R.compound_reliability_importance(S.series(2), [1.0, 1.0], 1)
    assert split.functioning is None and split.failure is None
    assert split.total == pytest.approx(1.0)


def test_report():
    """explicit components and lookups"""
    report = R.ImportanceReport("x", (0.1, 0.3), components=(4, 7))
    assert report.value(7) == pytest.approx(0.3)
    assert report.ranking() == [7, 4]
    assert len(report) == 2
    with pytest.raises(DimensionError):
        R.ImportanceReport("x", (0.1, 0.3), components=(1,))


def test_errors(gab):
    """bad reliability vectors and component ids"""
    with pytest.raises(DimensionError):
        R.reliability(gab, [0.5] * 8)
    with pytest.raises(InputError):
        R.reliability(S.series(2), [0.5, 1.5])
    with pytest.raises(InputError):
        R.reliability(S.series(2), [0.5, float("nan")])
    with pytest.raises(DimensionError):
        R.birnbaum(S.series(2), [0.5, 0.5], 3)


def test_compound_series_pair():
    """series pair at p = 1/2: a quarter each way"""
    split = R.compound_reliability_importance(S.series(2), [0.5, 0.5], 1)
    assert split == pytest.approx((0.25, 0.25, 0.5))
    assert R.compound_reliability_importance(S.parallel(2), [0.5, 0.5], 1).total == pytest.approx(0.5)


@pytest.mark.parametrize("phi", random_systems(40, 8, seed=14))
def test_duality(phi):
    """h_dual(1 - p) = 1 - h(p), and Birnbaum importance carries over at 1 - p"""
    p = np.random.default_rng(phi.n + 50).uniform(0.05, 0.95, phi.n)
    dual = S.dual(phi)
    assert R.reliability(dual, 1.0 - p) == pytest.approx(1.0 - R.reliability(phi, p), abs=1e-12)
    for i in range(1, phi.n + 1):
        assert R.birnbaum(dual, 1.0 - p, i) == pytest.approx(R.birnbaum(phi, p, i), abs=1e-12)


def test_duality_series_parallel():
    """series and parallel triples swap under duality"""
    q = [1.0 - v for v in P3]
    assert R.reliability(S.dual(S.series(3)), q) == pytest.approx(1.0 - 0.90288, abs=1e-12)
    values = R.birnbaum_all(S.dual(S.parallel(3)), q).values
    assert values == pytest.approx((0.0004, 0.002, 0.0005), abs=1e-12)
