"""Voting Game Importance: maintainers as players in a multilateral stopping game

States X_1, ..., X_N of a finite Markov chain (X_1 ~ initial) are visited
one stage at a time. At stages 1..N-1 every player declares stop (1) or
continue (0); the aggregate structure turns the declarations into one
decision. Stopping at stage n pays f_i(X_n) to player i plus the costs
c_i(X_k) of every step taken before (k = 1..n-1); stage N always stops.

The game is solved by backward induction over pure stage games. Player
values at stage 1, averaged over the initial distribution and normalized,
are the VGI vector. The default sense is "minimize" (values are costs).
"""
import math
import typing as T
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, EquilibriumError, InputError, NormalizationError
from .structure import StructureFunction, is_semicoherent

PLAYER_CAP = 12  # 2^p profiles per stage game
DEVIATION_CAP = 20  # 2^(m(N-1)) Markov deviations per player
_EPS = 1e-12
VERIFY_TOLERANCE = 1e-12  # smallest gain counted as a violation
_CHUNK = 1 << 16

SENSES = ("minimize", "maximize")
READINGS = ("expectation", "statewise")


def _frozen(values: T.Any, shape: T.Tuple[int, ...], name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.shape != shape:
        raise InputError(f"{name} has shape {array.shape}, expected {shape}")
    if not np.all(np.isfinite(array)):
        raise InputError(f"{name} must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StoppingGame:
    """finite-horizon multilateral stopping game over an m-state chain with p players"""

    transition: np.ndarray
    horizon: int
    payoff: np.ndarray
    cost: np.ndarray
    aggregate: StructureFunction
    initial: np.ndarray
    sense: str = "minimize"
    states: T.Tuple[str, ...] = field(default=())
    players: T.Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        transition = np.array(self.transition, dtype=float)
        if transition.ndim != 2 or transition.shape[0] != transition.shape[1] or transition.size == 0:
            raise InputError(f"transition must be a square matrix, got shape {transition.shape}")
        m = transition.shape[0]
        p = self.aggregate.n
        if np.any(transition < 0) or np.any(np.abs(transition.sum(axis=1) - 1.0) > _EPS):
            raise InputError("transition rows must be nonnegative and sum to 1 (within 1e-12)")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise InputError(f"horizon must be an integer >= 1, got {self.horizon}")
        initial = _frozen(self.initial, (m,), "initial distribution")
        if np.any(initial < 0) or abs(initial.sum() - 1.0) > _EPS:
            raise InputError("initial distribution must be a probability vector")
        if self.sense not in SENSES:
            raise InputError(f"sense must be one of {', '.join(SENSES)}, got {self.sense!r}")
        if not is_semicoherent(self.aggregate):
            raise InputError("aggregate must be monotone with all-continue -> 0 and all-stop -> 1")
        transition.setflags(write=False)
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "horizon", int(self.horizon))
        object.__setattr__(self, "payoff", _frozen(self.payoff, (p, m), "payoff"))
        object.__setattr__(self, "cost", _frozen(self.cost, (p, m), "cost"))
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "states", tuple(self.states) or tuple(str(x) for x in range(1, m + 1)))
        object.__setattr__(self, "players", tuple(self.players) or tuple(str(i) for i in range(1, p + 1)))
        if len(self.states) != m or len(self.players) != p:
            raise InputError(f"need {m} state labels and {p} player names")

    @property
    def m(self) -> int:
        """number of chain states"""
        return self.transition.shape[0]

    @property
    def p(self) -> int:
        """number of players"""
        return self.aggregate.n

    @property
    def sign(self) -> float:
        """+1 when lower values are better"""
        return 1.0 if self.sense == "minimize" else -1.0

    def continuation(self, values: np.ndarray) -> np.ndarray:
        """c_i(x) + sum_x' P(x, x') v_i(x') for next-stage values (p, m)"""
        return self.cost + values @ self.transition.T

    def expected(self, values: np.ndarray) -> np.ndarray:
        """E over the initial distribution of stage-1 values (p, m)"""
        return values @ self.initial


def _profile_index(profile: np.ndarray) -> np.ndarray:
    """declarations (..., p) as aggregate state indices (bit i-1 = player i)"""
    weights = 1 << np.arange(profile.shape[-1], dtype=np.int64)
    return (profile.astype(np.int64) * weights).sum(axis=-1)


@dataclass(frozen=True, eq=False)
class EquilibriumSolution:
    """profile[n-1, x, i-1]: declaration of player i at stage n < N in state x
    values[n-1, i-1, x]: v_i at stage n in state x"""

    game: StoppingGame
    profile: np.ndarray
    values: np.ndarray

    @property
    def stops(self) -> np.ndarray:
        """aggregated decision (N-1, m)"""
        return self.game.aggregate.table[_profile_index(self.profile)]

    @property
    def expected(self) -> np.ndarray:
        """E_{initial} v_i at stage 1, per player"""
        return self.game.expected(self.values[0])


def _lexicographic(s: int, p: int) -> T.Tuple[int, ...]:
    return tuple(s >> i & 1 for i in range(p))


def solve(game: StoppingGame) -> EquilibriumSolution:
    """backward induction with one pure Nash profile selected per (stage, state)"""
    p, m, horizon = game.p, game.m, game.horizon
    if p > PLAYER_CAP:
        raise CapacityError(f"{p} players exceed the stage-game cap {PLAYER_CAP}")
    profiles = np.arange(1 << p, dtype=np.int64)
    stop = game.aggregate.table[profiles]  # (2^p,)
    bits = 1 << np.arange(p, dtype=np.int64)
    flipped = profiles[:, None] ^ bits[None, :]  # (2^p, p): profile with player i deviating
    players = np.arange(p)

    values = np.empty((horizon, p, m))
    values[-1] = game.payoff
    chosen = np.zeros((max(horizon - 1, 0), m, p), dtype=bool)
    for n in range(horizon - 1, 0, -1):
        cont = game.continuation(values[n])
        # outcome[x, s, i]: value of player i when profile s is declared in state x
        outcome = np.where(stop[None, :, None], game.payoff.T[:, None, :], cont.T[:, None, :])
        gain = game.sign * (outcome - outcome[:, flipped, players])  # deviation improves iff > 0
        nash = np.all(gain <= _EPS, axis=2)
        for x in range(m):
            candidates = np.flatnonzero(nash[x])
            if len(candidates) == 0:
                raise EquilibriumError(n, x)
            totals = game.sign * outcome[x, candidates].sum(axis=1)
            best = totals.min()
            tied = [int(s) for s in candidates[totals <= best + _EPS]]
            pick = min(tied, key=lambda s: _lexicographic(s, p))
            if len({bool(stop[s]) for s in tied}) > 1:
                warnings.warn(
                    f"stage {n}, state {game.states[x]}: {len(tied)} equilibria tie on total value"
                    f", picked {_lexicographic(pick, p)}"
                )
            chosen[n - 1, x] = [bool(pick >> i & 1) for i in range(p)]
            values[n - 1, :, x] = outcome[x, pick]
    return EquilibriumSolution(game, chosen, values)


def evaluate_profile(game: StoppingGame, profile: np.ndarray) -> np.ndarray:
    """values (N, p, m) of an arbitrary Markov declaration profile (N-1, m, p)"""
    declared = np.asarray(profile, dtype=bool)
    if declared.shape != (game.horizon - 1, game.m, game.p):
        raise InputError(f"profile has shape {declared.shape}, expected {(game.horizon - 1, game.m, game.p)}")
    stops = game.aggregate.table[_profile_index(declared)]
    values = np.empty((game.horizon, game.p, game.m))
    values[-1] = game.payoff
    for n in range(game.horizon - 1, 0, -1):
        values[n - 1] = np.where(stops[n - 1][None, :], game.payoff, game.continuation(values[n]))
    return values


@dataclass(frozen=True)
class EquilibriumReport:
    """outcome of checking every Markov deviation of every player"""

    deviations: int
    violations: int
    max_violation: float
    per_player: T.Tuple[float, ...]

    def holds(self, tolerance: float = VERIFY_TOLERANCE) -> bool:
        """no deviation improves any player by more than tolerance"""
        return self.max_violation <= tolerance


def _player_gain(
    game: StoppingGame, solution: EquilibriumSolution, i: int, tolerance: float
) -> T.Tuple[float, int]:
    """largest improvement over all Markov deviations of player i, and how many improve"""
    steps = (game.horizon - 1) * game.m
    own = 1 << i
    others = _profile_index(solution.profile) & ~own  # (N-1, m)
    stop_declared = game.aggregate.table[others | own]
    stop_silent = game.aggregate.table[others]
    target = solution.values[:, i, :]  # (N, m)
    best, improving = -math.inf, 0
    for start in range(0, 1 << steps, _CHUNK):
        d = np.arange(start, min(start + _CHUNK, 1 << steps), dtype=np.int64)
        v = np.broadcast_to(game.payoff[i], (len(d), game.m)).copy()
        gain = (game.sign * (target[-1] - v)).max(axis=1)
        for n in range(game.horizon - 1, 0, -1):
            cont = game.cost[i] + v @ game.transition.T
            k = (n - 1) * game.m + np.arange(game.m)
            declared = ((d[:, None] >> k[None, :]) & 1).astype(bool)
            stops = np.where(declared, stop_declared[n - 1][None, :], stop_silent[n - 1][None, :])
            v = np.where(stops, game.payoff[i][None, :], cont)
            gain = np.maximum(gain, (game.sign * (target[n - 1][None, :] - v)).max(axis=1))
        best = max(best, float(gain.max()))
        improving += int(np.sum(gain > tolerance))
    return best, improving


def verify_equilibrium(
    game: StoppingGame, solution: EquilibriumSolution, tolerance: float = VERIFY_TOLERANCE
) -> EquilibriumReport:
    """Enumerates all 2^(m(N-1)) Markov stop rules of each player against the others' profile

    A violation is a deviation that improves the player's value at some
    stage and state (in the game's sense) by more than tolerance.
    """
    steps = (game.horizon - 1) * game.m
    if steps > DEVIATION_CAP:
        raise CapacityError(f"2^{steps} deviations per player exceed the cap 2^{DEVIATION_CAP}")
    gains = [_player_gain(game, solution, i, tolerance) for i in range(game.p)]
    per_player = tuple(g for g, _ in gains)
    return EquilibriumReport(
        deviations=game.p * (1 << steps),
        violations=sum(c for _, c in gains),
        max_violation=max(per_player),
        per_player=per_player,
    )


@dataclass(frozen=True)
class VgiVector:
    """normalized shares (values), the unnormalized expectations (raw) and the reading used"""

    values: T.Tuple[float, ...]
    raw: T.Tuple[float, ...]
    reading: str = "expectation"


def _shares(raw: np.ndarray) -> np.ndarray:
    total = raw.sum()
    if total == 0 or not (np.all(raw >= 0) or np.all(raw <= 0)):
        raise NormalizationError("player values must share one sign and not all vanish", raw.tolist())
    return raw / total


def vgi(
    game: StoppingGame, solution: T.Optional[EquilibriumSolution] = None, reading: str = "expectation"
) -> VgiVector:
    """Voting Game Importance of every player

    expectation: E[v_i(X_1)] / sum_j E[v_j(X_1)]
    statewise:   E[v_i(X_1) / sum_j v_j(X_1)]
    """
    if reading not in READINGS:
        raise InputError(f"reading must be one of {', '.join(READINGS)}, got {reading!r}")
    solved = solution or solve(game)
    raw = solved.expected
    if reading == "expectation":
        return VgiVector(tuple(_shares(raw).tolist()), tuple(raw.tolist()), reading)
    first = solved.values[0]
    reached = np.flatnonzero(game.initial > 0)
    shares = sum(game.initial[x] * _shares(first[:, x]) for x in reached)
    return VgiVector(tuple(np.asarray(shares, dtype=float).tolist()), tuple(raw.tolist()), reading)


@dataclass(frozen=True)
class SimulationResult:
    """per-player sample means and standard errors of realized totals"""

    mean: T.Tuple[float, ...]
    stderr: T.Tuple[float, ...]
    trials: int
    longest: int


def simulate(
    game: StoppingGame, solution: EquilibriumSolution, trials: int, seed: T.Optional[int] = None
) -> SimulationResult:
    """Monte Carlo rollout of the chain under the solution's profile

    One generator (numpy default_rng(seed)) drives every trial: the initial
    states come from one draw of `trials` choices, then each stage draws one
    uniform per trial (stopped trials included) and maps it through the
    cumulative transition row.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    cumulative = np.cumsum(game.transition, axis=1)
    cumulative[:, -1] = 1.0
    x = rng.choice(game.m, size=trials, p=game.initial)
    totals = np.zeros((trials, game.p))
    running = np.ones(trials, dtype=bool)
    stopped_at = np.full(trials, game.horizon)
    stops = solution.stops
    for n in range(1, game.horizon + 1):
        halt = running & (stops[n - 1, x] if n < game.horizon else True)
        totals[halt] += game.payoff[:, x[halt]].T
        stopped_at[halt] = n
        running &= ~halt
        totals[running] += game.cost[:, x[running]].T
        u = rng.random(trials)
        x = np.where(running, (u[:, None] < cumulative[x]).argmax(axis=1), x)
    if trials == 1:
        warnings.warn("a single trial has no standard error")
        stderr = np.full(game.p, math.nan)
    else:
        stderr = totals.std(axis=0, ddof=1) / math.sqrt(trials)
    return SimulationResult(
        tuple(totals.mean(axis=0).tolist()), tuple(stderr.tolist()), trials, int(stopped_at.max())
    )
