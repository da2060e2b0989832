"""Reliability polynomial h(p) and Birnbaum reliability importance

Components are assumed independent. h is read off the cached simple form
when a structure has one, otherwise it is built by pivotal decomposition
on the minimal path family (memoized on the reduced family), which never
touches all 2^n states.
"""
import typing as T
import warnings
from collections import Counter, namedtuple
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InputError
from .structure import SetFamily, StructureFunction, check_component

# I(i,1), I(i,0) and their sum, the Birnbaum importance
CompoundImportance = namedtuple("CompoundImportance", "functioning failure total")


@dataclass(frozen=True)
class ImportanceReport:
    """Per-component values of one importance measure

    components defaults to 1..len(values); normalization holds the sum (or
    denominator) the values were scaled by, when there is one.
    """

    measure: str
    values: T.Tuple[float, ...]
    components: T.Tuple[int, ...] = field(default=())
    normalization: T.Optional[float] = None

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        components = self.components or tuple(range(1, len(values) + 1))
        if len(components) != len(values):
            raise DimensionError(f"{len(components)} components for {len(values)} values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "components", tuple(components))

    def __len__(self) -> int:
        return len(self.values)

    def value(self, component: int) -> float:
        """value reported for one component id"""
        return self.values[self.components.index(component)]

    def ranking(self) -> T.List[int]:
        """component ids, most important first (ties keep id order)"""
        pairs = sorted(zip(self.components, self.values), key=lambda cv: -cv[1])
        return [c for c, _ in pairs]


def reliability_vector(phi: StructureFunction, p: T.Sequence[float]) -> np.ndarray:
    """validates p as n probabilities"""
    probs = np.asarray(p, dtype=float)
    if probs.shape != (phi.n,):
        raise DimensionError(f"reliability vector has shape {probs.shape}, structure has n={phi.n}")
    if np.any((probs < 0) | (probs > 1)) or np.any(np.isnan(probs)):
        raise InputError(f"reliabilities must lie in [0, 1], got {probs.tolist()}")
    return probs


def _pivotal(family: SetFamily, p: np.ndarray) -> float:
    memo: T.Dict[T.FrozenSet[T.FrozenSet[int]], float] = {}

    def h(paths: T.FrozenSet[T.FrozenSet[int]]) -> float:
        if frozenset() in paths:
            return 1.0
        if not paths:
            return 0.0
        if paths not in memo:
            counts = Counter(i for s in paths for i in s)
            j = min(counts, key=lambda i: (-counts[i], i))  # most shared component
            up = frozenset(s - {j} for s in paths)
            down = frozenset(s for s in paths if j not in s)
            memo[paths] = p[j - 1] * h(up) + (1.0 - p[j - 1]) * h(down)
        return memo[paths]

    return h(frozenset(family))


def reliability(phi: StructureFunction, p: T.Sequence[float]) -> float:
    """h(p) = P{phi(X) = 1} for independent components with reliabilities p"""
    probs = reliability_vector(phi, p)
    if phi.cached("form"):
        return phi.form.evaluate(probs)
    return _pivotal(phi.paths, probs)


def reliability_from_cuts(phi: StructureFunction, p: T.Sequence[float]) -> float:
    """h(p) through the minimal cuts: 1 - h_dual(1 - p), pivoting on the cut family"""
    probs = reliability_vector(phi, p)
    return 1.0 - _pivotal(phi.cuts, 1.0 - probs)


def _fixed(p: np.ndarray, i: int, value: float) -> np.ndarray:
    fixed = p.copy()
    fixed[i - 1] = value
    return fixed


def birnbaum(phi: StructureFunction, p: T.Sequence[float], i: int) -> float:
    """B(i|p) = h(1_i, p) - h(0_i, p), the probability that i is pivotal"""
    probs = reliability_vector(phi, p)
    check_component(phi, i)
    return reliability(phi, _fixed(probs, i, 1.0)) - reliability(phi, _fixed(probs, i, 0.0))


def birnbaum_all(phi: StructureFunction, p: T.Sequence[float]) -> ImportanceReport:
    """Birnbaum importance of every component"""
    values = [birnbaum(phi, p, i) for i in range(1, phi.n + 1)]
    return ImportanceReport("birnbaum", tuple(values))


def compound_reliability_importance(
    phi: StructureFunction, p: T.Sequence[float], i: int
) -> CompoundImportance:
    """Splits B(i|p) into the functioning and failure parts

    functioning = P{phi=1 | X_i=1} - P{phi=1}
    failure     = P{phi=0 | X_i=0} - P{phi=0}
    Both are None (with a warning) when h(p) is 0 or 1; total is always set.
    """
    probs = reliability_vector(phi, p)
    check_component(phi, i)
    h = reliability(phi, probs)
    up = reliability(phi, _fixed(probs, i, 1.0))
    down = reliability(phi, _fixed(probs, i, 0.0))
    if not 0.0 < h < 1.0:
        warnings.warn(f"h(p) = {h:g}: conditional importances of component {i} are undefined")
        return CompoundImportance(None, None, up - down)
    return CompoundImportance(up - h, h - down, up - down)
