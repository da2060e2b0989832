"""test structural.py
"""
import math
from fractions import Fraction

import pytest

from coherent import structural as X
from coherent import structure as S
from coherent.errors import InputError

from .conftest import SKIP_SLOW, random_systems

RANDOM = random_systems(200, 6, seed=31)


def test_birstruct_counts(birstruct):
    """n_r(i) for a series component and a parallel one"""
    assert X.critical_path_counts(birstruct, 1).counts == (0, 0, 3, 3, 1)
    assert X.critical_path_counts(birstruct, 1).total == 7
    assert X.critical_path_counts(birstruct, 4).counts == (0, 0, 1, 0, 0)


def test_birstruct_values(birstruct):
    """exact Birnbaum and Barlow-Proschan structural importance"""
    assert X.birnbaum_structural(birstruct, 1, exact=True) == Fraction(7, 16)
    assert X.birnbaum_structural(birstruct, 3, exact=True) == Fraction(1, 16)
    assert X.bp_structural(birstruct, 2, exact=True) == Fraction(9, 20)
    assert X.bp_structural(birstruct, 5, exact=True) == Fraction(1, 30)
    assert X.bp_structural(birstruct, 1) == pytest.approx(0.45)


def test_mixed_system():
    """x1 or (x2 and x3)"""
    phi = S.from_formula(S.Or((S.Atom(1), S.And((S.Atom(2), S.Atom(3))))))
    values = [X.bp_structural(phi, i, exact=True) for i in (1, 2, 3)]
    assert values == [Fraction(2, 3), Fraction(1, 6), Fraction(1, 6)]
    assert X.shapley_shubik(phi, 1, exact=True) == Fraction(2, 3)
    assert X.banzhaf(phi, 1, exact=True) == Fraction(3, 4)


@pytest.mark.parametrize("phi", RANDOM)
def test_identities(phi):
    """Banzhaf = Birnbaum structural, Shapley-Shubik = Barlow-Proschan structural"""
    components = range(1, phi.n + 1)
    shapley = [X.shapley_shubik(phi, i, exact=True) for i in components]
    assert sum(shapley) == 1
    for i in components:
        birnbaum = X.birnbaum_structural(phi, i, exact=True)
        assert X.banzhaf(phi, i, exact=True) == birnbaum
        assert X.bp_structural(phi, i, exact=True) == shapley[i - 1]
        assert X.bp_structural_integral(phi, i, exact=True) == shapley[i - 1]
        split = X.structural_functioning_failure(phi, i, exact=True)
        assert split.functioning == split.failure
        assert split.total == birnbaum
        fractions = X.critical_fractions(phi, i, exact=True)
        assert sum(fractions) / phi.n == shapley[i - 1]


@pytest.mark.parametrize("phi", RANDOM[:40])
def test_dual_invariance(phi):
    """both structural measures are unchanged by duality"""
    dual = S.dual(phi)
    for i in range(1, phi.n + 1):
        assert X.birnbaum_structural(dual, i, exact=True) == X.birnbaum_structural(phi, i, exact=True)
        assert X.bp_structural(dual, i, exact=True) == X.bp_structural(phi, i, exact=True)


@pytest.mark.parametrize("n", range(1, 21))
def test_shapley_weights(n):
    """symmetric, smallest in the middle, one per size class in total"""
    weights = X.shapley_weights(n)
    assert weights == tuple(reversed(weights))
    assert min(weights) == weights[(n - 1) // 2]
    assert sum(math.comb(n - 1, r - 1) * w for r, w in enumerate(weights, start=1)) == 1
    assert weights[0] == Fraction(1, n)


def test_normalized_banzhaf(birstruct):
    """shares sum to one"""
    shares = X.normalized_banzhaf(birstruct, exact=True)
    assert sum(shares) == 1
    assert shares[0] == Fraction(7, 17)
    assert shares[2] == Fraction(1, 17)


def test_structural_report(birstruct):
    """one report per measure name"""
    report = X.structural_report(birstruct, "bp")
    assert report.measure == "structural-bp"
    assert report.values == pytest.approx((0.45, 0.45, 1 / 30, 1 / 30, 1 / 30))
    for measure in X.MEASURES:
        assert len(X.structural_report(birstruct, measure)) == 5
    with pytest.raises(InputError):
        X.structural_report(birstruct, "fussell-vesely")


def test_errors():
    """power indices need a simple game; weights need n >= 1"""
    always = S.from_minimal_paths(2, [[]])
    with pytest.raises(InputError):
        X.banzhaf(always, 1)
    with pytest.raises(InputError):
        X.shapley_shubik(always, 1)
    with pytest.raises(InputError):
        X.shapley_weights(0)
    with pytest.raises(InputError):
        X.critical_path_counts(S.series(2), 3)


def test_small_systems():
    """series and parallel triples, series pair"""
    assert X.critical_path_counts(S.series(3), 2).counts == (0, 0, 1)
    assert X.critical_path_counts(S.parallel(3), 2).counts == (1, 0, 0)
    assert [X.birnbaum_structural(S.series(3), i) for i in (1, 2, 3)] == [0.25] * 3
    assert X.shapley_shubik(S.series(3), 1, exact=True) == Fraction(1, 3)
    split = X.structural_functioning_failure(S.series(2), 1)
    assert (split.functioning, split.failure, split.total) == (0.25, 0.25, 0.5)
    assert X.structural_functioning_failure(S.parallel(2), 1) == split


@pytest.mark.skipif(SKIP_SLOW, reason="env COHERENT_TESTS != slow")
@pytest.mark.parametrize("phi", random_systems(40, 12, seed=32))
def test_identities_large(phi):
    """counts and simple-form integrals agree on larger structures"""
    for i in range(1, phi.n + 1):
        assert X.bp_structural(phi, i, exact=True) == X.bp_structural_integral(phi, i, exact=True)
        assert X.banzhaf(phi, i, exact=True) == X.birnbaum_structural(phi, i, exact=True)
