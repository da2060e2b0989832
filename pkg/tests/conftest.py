"""shared systems and seeded random structures
"""
import os
import pathlib
import typing as T

import numpy as np
import pytest

from coherent import structure as S

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# slow suites (Monte Carlo with 10^5 trials, larger random sweeps) run when
# COHERENT_TESTS contains "slow"
SKIP_SLOW = "slow" not in os.getenv("COHERENT_TESTS", "")

GAB_EDGES = (
    ("A", "C"),
    ("A", "F"),
    ("C", "D"),
    ("C", "E"),
    ("F", "E"),
    ("F", "G"),
    ("E", "D"),
    ("D", "B"),
    ("G", "B"),
)


def random_coherent(rng: np.random.Generator, n: int) -> S.StructureFunction:
    """random antichain of path sets that uses every component"""
    while True:
        count = int(rng.integers(1, n + 2))
        sets = [{int(i) + 1 for i in np.flatnonzero(rng.random(n) < 0.5)} for _ in range(count)]
        family = S.antichain(s for s in sets if s)
        if family and set().union(*family) == set(range(1, n + 1)):
            return S.from_minimal_paths(n, family)


def random_systems(count: int, max_n: int, seed: int = 0) -> T.List[S.StructureFunction]:
    """count coherent structures with 1 <= n <= max_n, reproducible by seed"""
    rng = np.random.default_rng(seed)
    return [random_coherent(rng, int(rng.integers(1, max_n + 1))) for _ in range(count)]


def all_vectors(n: int) -> T.List[T.Tuple[int, ...]]:
    """every binary state vector, component 1 first"""
    return [tuple(k >> i & 1 for i in range(n)) for k in range(1 << n)]


@pytest.fixture(name="gab")
def fixture_gab() -> S.StructureFunction:
    """two-terminal network from A to B with 9 edges"""
    return S.from_two_terminal_graph("ABCDEFG", GAB_EDGES, "A", "B")


@pytest.fixture(name="birstruct")
def fixture_birstruct() -> S.StructureFunction:
    """components 1 and 2 in series with the parallel group 3, 4, 5"""
    group = S.Or((S.Atom(3), S.Atom(4), S.Atom(5)))
    return S.from_formula(S.And((S.Atom(1), S.Atom(2), group)), 5)


@pytest.fixture(name="fixture_path")
def fixture_fixture_path() -> T.Callable[[str], str]:
    """absolute path of a file in tests/fixtures"""
    return lambda name: str(FIXTURES / name)
