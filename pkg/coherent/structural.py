"""Structural importance: measures that need no component reliabilities

Everything here derives from one pass over the truth table per structure:
n_r(i), the number of states where i is pivotal while exactly r - 1 other
components work. Birnbaum structural importance (= Banzhaf) weights every
critical vector by 2^-(n-1); Barlow-Proschan structural importance
(= Shapley-Shubik) weights a size-r vector by (n-r)!(r-1)!/n!.

Values are exact fractions internally; pass exact=True to get them back.
"""
import math
import typing as T
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InputError
from .reliability import ImportanceReport
from .structure import StructureFunction, all_states, check_cap, check_component, is_semicoherent, simple_form

Number = T.Union[float, Fraction]

# I(j,1), I(j,0) and I(j) = I(j,1) + I(j,0), each normalized by 2^-n
StructuralSplit = namedtuple("StructuralSplit", "functioning failure total")

MEASURES = ("birnbaum", "bp", "banzhaf", "shapley-shubik", "normalized-banzhaf")


@dataclass(frozen=True)
class CriticalPathCounts:
    """counts[r - 1] = n_r(component), r = 1..n"""

    component: int
    counts: T.Tuple[int, ...]

    @property
    def total(self) -> int:
        """eta, the number of critical path vectors of the component"""
        return sum(self.counts)


def _popcounts(n: int) -> np.ndarray:
    idx = all_states(n)
    sizes = np.zeros(idx.shape, dtype=np.int64)
    for j in range(n):
        sizes += (idx >> j) & 1
    return sizes


@lru_cache(maxsize=64)
def _count_table(phi: StructureFunction) -> T.Tuple[T.Tuple[int, ...], ...]:
    check_cap(phi.n)
    idx, sizes, table = all_states(phi.n), _popcounts(phi.n), phi.table
    rows = []
    for i in range(1, phi.n + 1):
        bit = 1 << (i - 1)
        low = idx[(idx & bit) == 0]
        critical = low[table[low | bit] & ~table[low]]
        # r - 1 other components work in each critical state
        rows.append(tuple(int(c) for c in np.bincount(sizes[critical], minlength=phi.n)))
    return tuple(rows)


def _out(value: Fraction, exact: bool) -> Number:
    return value if exact else float(value)


def critical_path_counts(phi: StructureFunction, i: int) -> CriticalPathCounts:
    """n_1(i), ..., n_n(i)"""
    check_component(phi, i)
    return CriticalPathCounts(i, _count_table(phi)[i - 1])


def shapley_weights(n: int) -> T.Tuple[Fraction, ...]:
    """w(r) = (n-r)!(r-1)!/n! for r = 1..n"""
    if n < 1:
        raise InputError(f"need n >= 1, got {n}")
    full = math.factorial(n)
    return tuple(Fraction(math.factorial(n - r) * math.factorial(r - 1), full) for r in range(1, n + 1))


def birnbaum_structural(phi: StructureFunction, i: int, exact: bool = False) -> Number:
    """B(i|1/2, ..., 1/2) = sum_r n_r(i) / 2^(n-1)"""
    counts = critical_path_counts(phi, i)
    return _out(Fraction(counts.total, 1 << (phi.n - 1)), exact)


def bp_structural(phi: StructureFunction, i: int, exact: bool = False) -> Number:
    """sum_r n_r(i) (n-r)!(r-1)!/n!, the integral of B(i|p, ..., p) over p in [0, 1]"""
    counts = critical_path_counts(phi, i).counts
    weights = shapley_weights(phi.n)
    return _out(sum((c * w for c, w in zip(counts, weights)), Fraction(0)), exact)


def bp_structural_integral(phi: StructureFunction, i: int, exact: bool = False) -> Number:
    """the same integral, term by term from the simple form: sum_{T containing i} b_T / |T|"""
    check_component(phi, i)
    terms = simple_form(phi).items()
    return _out(sum((Fraction(b, len(t)) for t, b in terms if i in t), Fraction(0)), exact)


def critical_fractions(phi: StructureFunction, i: int, exact: bool = False) -> T.Tuple[Number, ...]:
    """n_r(i) / C(n-1, r-1): probability that a uniform size-r vector with x_i = 1 is critical"""
    counts = critical_path_counts(phi, i).counts
    return tuple(
        _out(Fraction(c, math.comb(phi.n - 1, r - 1)), exact) for r, c in enumerate(counts, start=1)
    )


def structural_functioning_failure(phi: StructureFunction, j: int, exact: bool = False) -> StructuralSplit:
    """I(j,1) = 2^-n sum (1 - x_j) delta_j(x) and I(j,0) = 2^-n sum x_j delta_j(x)"""
    check_component(phi, j)
    check_cap(phi.n)
    idx, table = all_states(phi.n), phi.table
    bit = 1 << (j - 1)
    pivotal = table[idx | bit] & ~table[idx & ~bit]
    scale = 1 << phi.n
    functioning = Fraction(int(np.sum(pivotal & ((idx & bit) == 0))), scale)
    failure = Fraction(int(np.sum(pivotal & ((idx & bit) != 0))), scale)
    return StructuralSplit(
        _out(functioning, exact), _out(failure, exact), _out(functioning + failure, exact)
    )


def _voting(phi: StructureFunction) -> StructureFunction:
    if not is_semicoherent(phi):
        raise InputError("power indices need a semi-coherent structure (a simple game)")
    return phi


def banzhaf(phi: StructureFunction, i: int, exact: bool = False) -> Number:
    """psi_i = eta_i / 2^(n-1)"""
    counts = critical_path_counts(_voting(phi), i)
    return _out(Fraction(counts.total, 1 << (phi.n - 1)), exact)


def shapley_shubik(phi: StructureFunction, i: int, exact: bool = False) -> Number:
    """phi_i = sum_r eta_i(r) (n-r)!(r-1)!/n!"""
    return bp_structural(_voting(phi), i, exact)


def normalized_banzhaf(phi: StructureFunction, exact: bool = False) -> T.Tuple[Number, ...]:
    """Banzhaf indices scaled to sum to 1"""
    raw = [banzhaf(phi, i, exact=True) for i in range(1, phi.n + 1)]
    total = sum(raw, Fraction(0))
    if total == 0:
        raise InputError("no component is ever pivotal")
    return tuple(_out(T.cast(Fraction, r) / total, exact) for r in raw)


def structural_report(phi: StructureFunction, measure: str = "birnbaum") -> ImportanceReport:
    """one structural measure for every component"""
    components = range(1, phi.n + 1)
    if measure == "birnbaum":
        values: T.Sequence[Number] = [birnbaum_structural(phi, i) for i in components]
    elif measure == "bp":
        values = [bp_structural(phi, i) for i in components]
    elif measure == "banzhaf":
        values = [banzhaf(phi, i) for i in components]
    elif measure == "shapley-shubik":
        values = [shapley_shubik(phi, i) for i in components]
    elif measure == "normalized-banzhaf":
        values = normalized_banzhaf(phi)
    else:
        raise InputError(f"unknown structural measure {measure!r}, choose from {', '.join(MEASURES)}")
    return ImportanceReport(f"structural-{measure}", tuple(float(v) for v in values))
