"""Binary monotone structure functions

A structure on components 1..n is kept in one of three backends:
- Formula: nested And / Or / KOutOfN over Atom leaves (monotone by construction)
- TruthTable: 2^n bits, state index k = sum(x_i << (i - 1)), so component 1
  is the least significant bit
- PathFamily: an antichain of minimal path sets

Truth tables, minimal path/cut families and the simple form are computed on
demand and cached on the (otherwise immutable) instance. Anything that needs
all 2^n states checks n against COHERENT_CAP first (default: 24).
"""
import math
import os
import typing as T
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import networkx as nx
import numpy as np

from .errors import CapacityError, DimensionError, InputError

_CAP = 24

SetFamily = T.Tuple[T.FrozenSet[int], ...]
StateVector = T.Tuple[int, ...]


def enumeration_cap(cap: T.Optional[int] = None) -> int:
    """largest n accepted by 2^n algorithms (env: COHERENT_CAP)"""
    return int(cap if cap is not None else os.getenv("COHERENT_CAP", str(_CAP)))


def check_cap(n: int, cap: T.Optional[int] = None) -> None:
    """raises CapacityError when 2^n enumeration is not allowed"""
    limit = enumeration_cap(cap)
    if n > limit:
        raise CapacityError(f"n={n} exceeds the enumeration cap {limit} (COHERENT_CAP)")


def canonical(sets: T.Iterable[T.Iterable[int]]) -> SetFamily:
    """sorts sets by size, then lexicographically (drops duplicates)"""
    unique = {frozenset(s) for s in sets}
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(s))))


def antichain(sets: T.Iterable[T.Iterable[int]]) -> SetFamily:
    """keeps only the inclusion-minimal members, canonically ordered"""
    kept: T.List[T.FrozenSet[int]] = []
    for member in canonical(sets):
        if not any(k <= member for k in kept):
            kept.append(member)
    return tuple(kept)


def _mask(members: T.Iterable[int]) -> int:
    return sum(1 << (i - 1) for i in members)


def _members(index: int, n: int) -> T.FrozenSet[int]:
    return frozenset(i for i in range(1, n + 1) if index >> (i - 1) & 1)


def all_states(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


### Formula syntax


@dataclass(frozen=True)
class Atom:
    """a single component"""

    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise InputError(f"atom index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class And:
    """series connection"""

    children: T.Tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.children) == 0:
            raise InputError("and: needs at least one argument")


@dataclass(frozen=True)
class Or:
    """parallel connection"""

    children: T.Tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.children) == 0:
            raise InputError("or: needs at least one argument")


@dataclass(frozen=True)
class KOutOfN:
    """works when at least k children work"""

    k: int
    children: T.Tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not 1 <= self.k <= len(self.children):
            raise InputError(f"kofn: need 1 <= k <= {len(self.children)}, got {self.k}")


Formula = T.Union[Atom, And, Or, KOutOfN]


def _atoms(node: Formula) -> T.Set[int]:
    if isinstance(node, Atom):
        return {node.index}
    return set().union(*(_atoms(c) for c in node.children))


def _formula_value(node: Formula, x: StateVector) -> int:
    if isinstance(node, Atom):
        return x[node.index - 1]
    values = [_formula_value(c, x) for c in node.children]
    if isinstance(node, And):
        return int(all(values))
    if isinstance(node, Or):
        return int(any(values))
    return int(sum(values) >= node.k)


def _formula_table(node: Formula, idx: np.ndarray) -> np.ndarray:
    if isinstance(node, Atom):
        return ((idx >> (node.index - 1)) & 1).astype(bool)
    parts = [_formula_table(c, idx) for c in node.children]
    if isinstance(node, And):
        return np.logical_and.reduce(parts)
    if isinstance(node, Or):
        return np.logical_or.reduce(parts)
    return np.sum(parts, axis=0) >= node.k


def _joins(families: T.Sequence[SetFamily]) -> SetFamily:
    joined: SetFamily = (frozenset(),)
    for family in families:
        joined = antichain(a | b for a in joined for b in family)
    return joined


def _formula_paths(node: Formula) -> SetFamily:
    """minimal paths straight from the formula, no 2^n table"""
    if isinstance(node, Atom):
        return (frozenset({node.index}),)
    families = [_formula_paths(c) for c in node.children]
    if isinstance(node, Or):
        return antichain(s for family in families for s in family)
    if isinstance(node, And):
        return _joins(families)
    return antichain(s for group in combinations(families, node.k) for s in _joins(group))


def _formula_dual(node: Formula) -> Formula:
    if isinstance(node, Atom):
        return node
    children = tuple(_formula_dual(c) for c in node.children)
    if isinstance(node, And):
        return Or(children)
    if isinstance(node, Or):
        return And(children)
    return KOutOfN(len(children) - node.k + 1, children)


def _formula_map(node: Formula, leaf: T.Callable[[int], Formula]) -> Formula:
    if isinstance(node, Atom):
        return leaf(node.index)
    children = tuple(_formula_map(c, leaf) for c in node.children)
    if isinstance(node, KOutOfN):
        return KOutOfN(node.k, children)
    return type(node)(children)


### Backends


@dataclass(frozen=True)
class FormulaBackend:
    """structure given as a monotone formula"""

    formula: Formula


@dataclass(frozen=True, eq=False)
class TruthTable:
    """structure given by all 2^n values (bool array)"""

    bits: np.ndarray


@dataclass(frozen=True)
class PathFamily:
    """structure given by its minimal path sets"""

    family: SetFamily


Backend = T.Union[FormulaBackend, TruthTable, PathFamily]


class SimpleForm(dict):
    """Multilinear polynomial sum(b_T * prod(x_j for j in T)) keyed by T

    Only nonzero integer coefficients are stored. Evaluated at binary x it
    is the structure function; at reliabilities p it is h(p).
    """

    def __init__(self, terms: T.Iterable[T.Tuple[T.FrozenSet[int], int]] = ()) -> None:
        super().__init__((frozenset(t), int(b)) for t, b in terms if b != 0)
        ordered = sorted(self.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        self._index = [(np.array(sorted(t), dtype=np.int64) - 1, b) for t, b in ordered]

    def __repr__(self) -> str:
        if not self:
            return "0"
        parts = []
        for index, coef in self._index:
            monomial = "".join(f"x{i + 1}" for i in index)
            magnitude = str(abs(coef)) if abs(coef) != 1 or not monomial else ""
            parts.append(f"{'-' if coef < 0 else '+'} {magnitude}{monomial}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+") else "-" + text[2:]

    def evaluate(self, p: T.Sequence[float]) -> float:
        """sum of terms at p (binary or real), accumulated with fsum"""
        values = np.asarray(p, dtype=float)
        return math.fsum(b * float(values[index].prod()) for index, b in self._index)

    def derivative(self, i: int) -> "SimpleForm":
        """partial derivative in x_i (again multilinear)"""
        return SimpleForm((t - {i}, b) for t, b in self.items() if i in t)


class StructureFunction:
    """A monotone boolean function phi on components 1..n

    Instances are immutable; cached_property fields (table, paths, cuts,
    form) are filled on first use.
    """

    def __init__(self, n: int, backend: Backend) -> None:
        if n < 1:
            raise InputError(f"a structure needs n >= 1 components, got {n}")
        self.n = n
        self.backend = backend
        if isinstance(backend, FormulaBackend):
            outside = {i for i in _atoms(backend.formula) if i > n}
            if outside:
                raise DimensionError(f"formula atoms {sorted(outside)} exceed n={n}")

    def __repr__(self) -> str:
        kind = type(self.backend).__name__
        return f"StructureFunction(n={self.n}, backend={kind})"

    def __call__(self, x: T.Sequence[int]) -> int:
        return evaluate(self, x)

    def cached(self, name: str) -> bool:
        """whether a lazily computed field (e.g. "form") is available"""
        return name in self.__dict__

    @cached_property
    def table(self) -> np.ndarray:
        """bool array of phi over all states (index bit i-1 = component i)"""
        check_cap(self.n)
        if isinstance(self.backend, TruthTable):
            return self.backend.bits
        idx = all_states(self.n)
        if isinstance(self.backend, FormulaBackend):
            return _formula_table(self.backend.formula, idx)
        table = np.zeros(idx.shape, dtype=bool)
        for members in self.backend.family:
            mask = _mask(members)
            table |= (idx & mask) == mask
        return table

    @cached_property
    def paths(self) -> SetFamily:
        """minimal path sets, alpha(phi)"""
        if isinstance(self.backend, PathFamily):
            return self.backend.family
        if isinstance(self.backend, FormulaBackend):
            return _formula_paths(self.backend.formula)
        return _minimal_points(self.table, self.n)

    @cached_property
    def cuts(self) -> SetFamily:
        """minimal cut sets, beta(phi)"""
        return _minimal_points(~self.table[::-1], self.n)

    @cached_property
    def form(self) -> SimpleForm:
        """the unique simple form (Moebius transform of the table)"""
        coef = self.table.astype(np.int64)
        for j in range(self.n):
            view = coef.reshape(-1, 2, 1 << j)
            view[:, 1, :] -= view[:, 0, :]
        return SimpleForm((_members(int(k), self.n), int(coef[k])) for k in np.flatnonzero(coef))


def _minimal_points(table: np.ndarray, n: int) -> SetFamily:
    """minimal true states of a monotone table: true, and every one-bit-down neighbor false"""
    idx = all_states(n)
    minimal = table.copy()
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        minimal &= ((idx & bit) == 0) | ~table[idx ^ bit]
    return canonical(_members(int(k), n) for k in np.flatnonzero(minimal))


def _is_monotone(table: np.ndarray, n: int) -> bool:
    idx = all_states(n)
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        low = idx[(idx & bit) == 0]
        if np.any(table[low] & ~table[low | bit]):
            return False
    return True


### Construction


def from_formula(formula: Formula, n: T.Optional[int] = None) -> StructureFunction:
    """structure of a formula; n defaults to the largest atom index"""
    return StructureFunction(n or max(_atoms(formula)), FormulaBackend(formula))


def series(n: int) -> StructureFunction:
    """works iff every component works"""
    return from_formula(And(tuple(Atom(i) for i in range(1, n + 1))), n)


def parallel(n: int) -> StructureFunction:
    """works iff some component works"""
    return from_formula(Or(tuple(Atom(i) for i in range(1, n + 1))), n)


def k_out_of_n(k: int, n: int) -> StructureFunction:
    """works iff at least k of n components work"""
    return from_formula(KOutOfN(k, tuple(Atom(i) for i in range(1, n + 1))), n)


def from_truth_table(n: int, bits: T.Union[str, T.Sequence[int], np.ndarray]) -> StructureFunction:
    """structure from 2^n values; character/entry k is phi at state index k"""
    check_cap(n)
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise InputError("truth table must only contain 0 and 1")
        bits = [int(b) for b in bits]
    table = np.asarray(bits).astype(bool)
    if table.shape != (1 << n,):
        raise DimensionError(f"truth table for n={n} needs {1 << n} entries, got {table.size}")
    if not _is_monotone(table, n):
        raise InputError("truth table is not monotone (incoherent structures are unsupported)")
    table.setflags(write=False)
    return StructureFunction(n, TruthTable(table))


def from_minimal_paths(n: int, family: T.Iterable[T.Iterable[int]]) -> StructureFunction:
    """structure whose minimal paths are the antichain reduction of family"""
    members = [frozenset(s) for s in family]
    if not members:
        raise InputError("path family must not be empty")
    outside = {i for s in members for i in s if not 1 <= i <= n}
    if outside:
        raise DimensionError(f"path members {sorted(outside)} outside 1..{n}")
    return StructureFunction(n, PathFamily(antichain(members)))


def from_two_terminal_graph(
    nodes: T.Iterable[T.Hashable],
    directed_edges: T.Sequence[T.Tuple[T.Hashable, T.Hashable]],
    source: T.Hashable,
    target: T.Hashable,
) -> StructureFunction:
    """components are edges 1..n (input order); works iff source reaches target"""
    if source == target:
        raise InputError("source and target must differ")
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(nodes)
    for key, (head, tail) in enumerate(directed_edges, start=1):
        if head not in graph or tail not in graph:
            raise InputError(f"edge {key} ({head}->{tail}) uses an unknown node")
        graph.add_edge(head, tail, key=key)
    for end in (source, target):
        if end not in graph:
            raise InputError(f"terminal {end} is not a node")
    if not nx.has_path(graph, source, target):
        raise InputError(f"{target} is unreachable from {source}, even with all edges working")
    # depth-first enumeration of simple paths; edge keys are component ids
    walks = nx.all_simple_edge_paths(graph, source, target)
    family = antichain(frozenset(key for _, _, key in walk) for walk in walks)
    return StructureFunction(len(directed_edges), PathFamily(family))


### Interrogation


def check_component(phi: StructureFunction, i: int) -> int:
    if not 1 <= i <= phi.n:
        raise DimensionError(f"component {i} outside 1..{phi.n}")
    return i


def state_vector(phi: StructureFunction, x: T.Sequence[int]) -> StateVector:
    """validates x as a binary vector of length phi.n"""
    states = tuple(int(v) for v in x)
    if len(states) != phi.n:
        raise DimensionError(f"state vector has {len(states)} entries, structure has n={phi.n}")
    if any(v not in (0, 1) for v in states):
        raise InputError(f"state vector entries must be 0 or 1, got {states}")
    return states


def evaluate(phi: StructureFunction, x: T.Sequence[int]) -> int:
    """phi(x) for a binary state vector"""
    states = state_vector(phi, x)
    if phi.cached("table") or isinstance(phi.backend, TruthTable):
        return int(phi.table[_mask(i + 1 for i, v in enumerate(states) if v)])
    if isinstance(phi.backend, FormulaBackend):
        return _formula_value(phi.backend.formula, states)
    return int(any(all(states[i - 1] for i in s) for s in phi.backend.family))


def _pivots(phi: StructureFunction, j: int, x: T.Sequence[int]) -> T.Tuple[int, int]:
    check_component(phi, j)
    states = list(x)
    if len(states) != phi.n:
        raise DimensionError(f"state vector has {len(states)} entries, structure has n={phi.n}")
    states[j - 1] = 1
    up = evaluate(phi, states)
    states[j - 1] = 0
    return up, evaluate(phi, states)


def delta(phi: StructureFunction, j: int, x: T.Sequence[int]) -> int:
    """phi(1_j, x) - phi(0_j, x): 1 iff component j is pivotal at x"""
    up, down = _pivots(phi, j, x)
    return up - down


def mu(phi: StructureFunction, j: int, x: T.Sequence[int]) -> int:
    """phi(0_j, x), so that phi(x) = x_j * delta + mu"""
    return _pivots(phi, j, x)[1]


def is_relevant(phi: StructureFunction, i: int) -> bool:
    """true iff some state makes component i pivotal"""
    check_component(phi, i)
    idx = all_states(phi.n)
    bit = 1 << (i - 1)
    low = idx[(idx & bit) == 0]
    return bool(np.any(phi.table[low] != phi.table[low | bit]))


def order(phi: StructureFunction) -> int:
    """number of relevant components"""
    return sum(is_relevant(phi, i) for i in range(1, phi.n + 1))


def is_semicoherent(phi: StructureFunction) -> bool:
    """monotone, phi(0) = 0 and phi(1) = 1"""
    table = phi.table
    return bool(not table[0] and table[-1]) and _is_monotone(table, phi.n)


def is_coherent(phi: StructureFunction) -> bool:
    """semi-coherent with every component relevant"""
    return is_semicoherent(phi) and order(phi) == phi.n


def require_coherent(phi: StructureFunction, role: str = "structure") -> StructureFunction:
    """raises InputError unless phi is coherent, read off the minimal paths"""
    family = phi.paths
    if not family or frozenset() in family:
        raise InputError(f"{role} is constant, so not coherent")
    idle = set(range(1, phi.n + 1)) - set().union(*family)
    if idle:
        raise InputError(f"{role} is not coherent: components {sorted(idle)} are irrelevant")
    return phi


def equivalent(phi: StructureFunction, psi: StructureFunction) -> bool:
    """same n and same value on every state"""
    return phi.n == psi.n and bool(np.array_equal(phi.table, psi.table))


def minimal_paths(phi: StructureFunction) -> SetFamily:
    """alpha(phi), canonically ordered"""
    return phi.paths


def minimal_cuts(phi: StructureFunction) -> SetFamily:
    """beta(phi), canonically ordered"""
    return phi.cuts


def simple_form(phi: StructureFunction) -> SimpleForm:
    """the unique multilinear representation of phi"""
    return phi.form


def is_path_set(phi: StructureFunction, members: T.Iterable[int]) -> bool:
    """phi(1^A, 0^rest) = 1"""
    chosen = {check_component(phi, i) for i in members}
    return evaluate(phi, [int(i in chosen) for i in range(1, phi.n + 1)]) == 1


def is_cut_set(phi: StructureFunction, members: T.Iterable[int]) -> bool:
    """phi(0^A, 1^rest) = 0"""
    chosen = {check_component(phi, i) for i in members}
    return evaluate(phi, [int(i not in chosen) for i in range(1, phi.n + 1)]) == 0


def is_serial(phi: StructureFunction, i: int) -> bool:
    """component i is in series with the rest: {i} is a cut set"""
    return is_cut_set(phi, [i])


def is_parallel(phi: StructureFunction, i: int) -> bool:
    """component i is in parallel with the rest: {i} is a path set"""
    return is_path_set(phi, [i])


def winning_coalitions(phi: StructureFunction) -> SetFamily:
    """all path sets; phi read as a simple game"""
    return canonical(_members(int(k), phi.n) for k in np.flatnonzero(phi.table))


def blocking_coalitions(phi: StructureFunction) -> SetFamily:
    """all cut sets: coalitions whose complement is losing"""
    full = (1 << phi.n) - 1
    return canonical(_members(full ^ int(k), phi.n) for k in np.flatnonzero(~phi.table))


def path_form_value(phi: StructureFunction, x: T.Sequence[int]) -> int:
    """1 - prod over minimal paths S of (1 - prod_{i in S} x_i)"""
    states = state_vector(phi, x)
    value = 1
    for members in phi.paths:
        value *= 1 - int(all(states[i - 1] for i in members))
    return 1 - value


def cut_form_value(phi: StructureFunction, x: T.Sequence[int]) -> int:
    """prod over minimal cuts S of (1 - prod_{i in S} (1 - x_i))"""
    states = state_vector(phi, x)
    value = 1
    for members in phi.cuts:
        value *= 1 - int(all(states[i - 1] == 0 for i in members))
    return value


### Transformation


def dual(phi: StructureFunction) -> StructureFunction:
    """phi^D(x) = 1 - phi(1 - x)"""
    if isinstance(phi.backend, FormulaBackend):
        return StructureFunction(phi.n, FormulaBackend(_formula_dual(phi.backend.formula)))
    if isinstance(phi.backend, PathFamily):
        return StructureFunction(phi.n, PathFamily(phi.cuts))
    # complementing every bit of the index reverses the array
    return from_truth_table(phi.n, ~phi.table[::-1])


def compose(outer: StructureFunction, position: int, inner: StructureFunction) -> StructureFunction:
    """Substitutes inner for component `position` of outer

    Re-indexing: outer components before `position` keep their ids, inner
    component j becomes position + j - 1, and outer components after
    `position` shift up by inner.n - 1. Both structures must be coherent.
    """
    check_component(require_coherent(outer, "outer structure"), position)
    require_coherent(inner, "inner structure")
    m = inner.n
    shift = lambda j: j if j < position else j + m - 1
    place = lambda j: j + position - 1
    n = outer.n + m - 1
    if isinstance(outer.backend, FormulaBackend) and isinstance(inner.backend, FormulaBackend):
        moved = _formula_map(inner.backend.formula, lambda j: Atom(place(j)))
        leaf = lambda j: moved if j == position else Atom(shift(j))
        return StructureFunction(n, FormulaBackend(_formula_map(outer.backend.formula, leaf)))
    family: T.List[T.FrozenSet[int]] = []
    for members in outer.paths:
        rest = frozenset(shift(j) for j in members if j != position)
        if position in members:
            family.extend(rest | frozenset(place(j) for j in s) for s in inner.paths)
        else:
            family.append(rest)
    return from_minimal_paths(n, family)


def permute(phi: StructureFunction, order_: T.Sequence[int]) -> StructureFunction:
    """relabels components: new component k is old component order_[k - 1]"""
    if sorted(order_) != list(range(1, phi.n + 1)):
        raise DimensionError(f"{list(order_)} is not a permutation of 1..{phi.n}")
    new_id = {old: new for new, old in enumerate(order_, start=1)}
    if isinstance(phi.backend, FormulaBackend):
        moved = _formula_map(phi.backend.formula, lambda j: Atom(new_id[j]))
        return StructureFunction(phi.n, FormulaBackend(moved))
    return from_minimal_paths(phi.n, ({new_id[j] for j in s} for s in phi.paths))


def pivot(phi: StructureFunction, i: int, value: int) -> StructureFunction:
    """restriction phi(value_i, .) on the remaining n-1 components (ids above i shift down)"""
    check_component(phi, i)
    if phi.n == 1:
        raise InputError("cannot restrict the only component of a structure")
    y = all_states(phi.n - 1)
    low = y & ((1 << (i - 1)) - 1)
    high = (y >> (i - 1)) << i
    return from_truth_table(phi.n - 1, phi.table[high | low | (int(value) << (i - 1))])


def linear_composition(first: StructureFunction, second: StructureFunction) -> StructureFunction:
    """h(x, x_{n+1}) = x_{n+1} * first(x) + (1 - x_{n+1}) * second(x)"""
    if first.n != second.n:
        raise DimensionError(f"structures differ in size: {first.n} vs. {second.n}")
    check_cap(first.n + 1)
    # new component n+1 is the top bit: the lower half of the table has it failed
    return from_truth_table(first.n + 1, np.concatenate([second.table, first.table]))
