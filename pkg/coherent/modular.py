"""Modules: phi(x) = organizer[inner(x^M), x^rest]

A module M is found (or refuted) exhaustively: arrange phi as a matrix with
one row per state of the remaining components and one column per state of
M. M is modular iff every non-constant row is the same function of x^M,
which is then the inner structure; the organizer reads each row at "module
failed" and "module working".

Organizer positions: components outside M keep their relative order, and
the module takes the place of its smallest member.
"""
import typing as T
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ModularityError
from .lifetime import TOLERANCE, LifetimeModel, bp_total, fit_lifetimes, stieltjes
from .reliability import ImportanceReport, birnbaum, reliability, reliability_vector
from .structure import (
    StructureFunction,
    all_states,
    check_cap,
    check_component,
    from_truth_table,
    require_coherent,
)


def _spread(local: np.ndarray, members: T.Sequence[int]) -> np.ndarray:
    """re-indexes states over `members` (bit k = members[k]) as full states"""
    full = np.zeros(local.shape, dtype=np.int64)
    for k, component in enumerate(members):
        full |= ((local >> k) & 1) << (component - 1)
    return full


def _vector(index: int, n: int) -> T.Tuple[int, ...]:
    return tuple(index >> k & 1 for k in range(n))


@dataclass(frozen=True)
class ModuleDecomposition:
    """phi split into an organizer over the slot + rest, and an inner structure over M"""

    structure: StructureFunction
    module: T.Tuple[int, ...]
    rest: T.Tuple[int, ...]
    position: int
    organizer: StructureFunction
    inner: StructureFunction

    def inner_index(self, component: int) -> int:
        """id of a module member inside the inner structure"""
        if component not in self.module:
            raise DimensionError(f"component {component} is not in the module {list(self.module)}")
        return self.module.index(component) + 1

    def outer_index(self, component: int) -> int:
        """id of a non-member inside the organizer"""
        if component not in self.rest:
            raise DimensionError(f"component {component} is inside the module")
        k = self.rest.index(component) + 1
        return k if k < self.position else k + 1

    def module_reliability(self, p: np.ndarray) -> float:
        """h of the inner structure at the members' reliabilities"""
        return reliability(self.inner, [p[i - 1] for i in self.module])

    def organizer_vector(self, p: np.ndarray) -> np.ndarray:
        """organizer reliabilities: the rest in order, the module's h at its slot"""
        outer = [float(p[i - 1]) for i in self.rest]
        outer.insert(self.position - 1, self.module_reliability(p))
        return np.array(outer)


def decompose(phi: StructureFunction, module: T.Iterable[int]) -> ModuleDecomposition:
    """finds organizer and inner structure for M of a coherent phi, or raises ModularityError"""
    require_coherent(phi)
    members = tuple(sorted({check_component(phi, i) for i in module}))
    if not members:
        raise DimensionError("a module needs at least one component")
    check_cap(phi.n)
    rest = tuple(i for i in range(1, phi.n + 1) if i not in members)
    position = sum(1 for i in rest if i < members[0]) + 1
    m, r = len(members), len(rest)

    y, z = all_states(m), all_states(r)
    spread_z, spread_y = _spread(z, rest), _spread(y, members)
    grid = phi.table[spread_z[:, None] | spread_y[None, :]]
    full = lambda zi, yi: _vector(int(spread_z[zi] | spread_y[yi]), phi.n)

    # members of a coherent phi are relevant, so some row varies
    varying = np.flatnonzero(grid.min(axis=1) != grid.max(axis=1))
    row = grid[varying[0]]
    for other in varying[1:]:
        if not np.array_equal(grid[other], row):
            # same x^M, two rest states, different reactions to the module
            col = int(np.flatnonzero(grid[other] != row)[0])
            witness = (full(int(varying[0]), col), full(int(other), col))
            raise ModularityError(f"{list(members)} is not a module", witness)
    inner = from_truth_table(m, row)

    # organizer state w: bit position-1 is the slot, the rest fill the other bits in order
    w = all_states(r + 1)
    slot = (w >> (position - 1)) & 1
    low = w & ((1 << (position - 1)) - 1)
    others = low | ((w >> position) << (position - 1))
    organizer = from_truth_table(r + 1, np.where(slot == 1, grid[others, -1], grid[others, 0]))

    # exhaustive identity check
    outer_state = (z[:, None] & ((1 << (position - 1)) - 1)) | ((z[:, None] >> (position - 1)) << position)
    rebuilt = organizer.table[outer_state | (row[None, :].astype(np.int64) << (position - 1))]
    if not np.array_equal(rebuilt, grid):
        bad_z, bad_y = (int(v[0]) for v in np.nonzero(rebuilt != grid))
        raise ModularityError(f"{list(members)} failed the identity check", (full(bad_z, bad_y),) * 2)
    return ModuleDecomposition(phi, members, rest, position, organizer, inner)


def _member(dec: ModuleDecomposition, i: int) -> int:
    return dec.inner_index(check_component(dec.structure, i))


def birnbaum_module_chain(dec: ModuleDecomposition, p: T.Sequence[float], i: int) -> float:
    """B(slot | organizer at module reliability) * B(i | inner)"""
    k = _member(dec, i)
    probs = reliability_vector(dec.structure, p)
    outer = birnbaum(dec.organizer, dec.organizer_vector(probs), dec.position)
    return outer * birnbaum(dec.inner, [probs[j - 1] for j in dec.module], k)


def bp_module_component(
    dec: ModuleDecomposition, lifetimes: LifetimeModel, i: int, tolerance: float = TOLERANCE
) -> float:
    """integral of B(slot | organizer(Q(t))) * B(i | inner(Q^M(t))) dF_i(t)"""
    k = _member(dec, i)
    model = fit_lifetimes(dec.structure, lifetimes)

    def g(t: float) -> float:
        q = model.survival(t)
        outer = birnbaum(dec.organizer, dec.organizer_vector(q), dec.position)
        return outer * birnbaum(dec.inner, [q[j - 1] for j in dec.module], k)

    return stieltjes(g, model[i], breaks=model.breaks, tolerance=tolerance)


def bp_module(dec: ModuleDecomposition, lifetimes: LifetimeModel, tolerance: float = TOLERANCE) -> float:
    """probability that the module causes the system failure"""
    return sum(bp_module_component(dec, lifetimes, i, tolerance) for i in dec.module)


def bp_module_factored(
    dec: ModuleDecomposition, lifetimes: LifetimeModel, i: int, tolerance: float = TOLERANCE
) -> float:
    """(module causes system failure) * (i causes module failure), integrated separately

    Unlike the Birnbaum chain rule this product is generally not the flat
    bp_total of i.
    """
    k = _member(dec, i)
    inner_model = LifetimeModel(tuple(lifetimes[j] for j in dec.module))
    return bp_module(dec, lifetimes, tolerance) * bp_total(dec.inner, inner_model, k, tolerance)


def module_report(
    dec: ModuleDecomposition,
    p: T.Optional[T.Sequence[float]] = None,
    lifetimes: T.Optional[LifetimeModel] = None,
    tolerance: float = TOLERANCE,
) -> ImportanceReport:
    """chain-rule Birnbaum values at p, or Barlow-Proschan values under lifetimes, per member"""
    if (p is None) == (lifetimes is None):
        raise DimensionError("give exactly one of reliabilities or lifetimes")
    if p is not None:
        values = [birnbaum_module_chain(dec, p, i) for i in dec.module]
        probs = reliability_vector(dec.structure, p)
        return ImportanceReport(
            "module-birnbaum", tuple(values), dec.module, normalization=dec.module_reliability(probs)
        )
    assert lifetimes is not None
    values = [bp_module_component(dec, lifetimes, i, tolerance) for i in dec.module]
    return ImportanceReport("module-bp", tuple(values), dec.module, normalization=sum(values))
