"""Component lifetimes, system survival and lifetime importance

Each component i has a failure CDF F_i, survival Q_i = 1 - F_i and density
f_i. The system survives t with probability h(Q(t)). Barlow-Proschan
importance integrates B(i|Q(t)) against dF_i; integrals over [0, inf) are
taken in u = F_i(t) coordinates on [0, 1] so no tail is truncated, with
every empirical knot passed to the quadrature as a breakpoint.
"""
import math
import typing as T
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import DegenerateError, DifferentiabilityError, DimensionError, InputError, QuadratureError
from .reliability import ImportanceReport, birnbaum, reliability
from .structure import StructureFunction, check_component

TOLERANCE = 1e-9  # absolute target of each integral
_FLOOR = 1e-6  # estimates above this are errors, not warnings


@dataclass(frozen=True)
class Exponential:
    """constant failure rate"""

    rate: float

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise InputError(f"exponential rate must be > 0, got {self.rate}")

    breaks: T.ClassVar[T.Tuple[float, ...]] = ()

    def cdf(self, t: float) -> float:
        return -math.expm1(-self.rate * t)

    def sf(self, t: float) -> float:
        return math.exp(-self.rate * t)

    def pdf(self, t: float) -> float:
        return self.rate * math.exp(-self.rate * t)

    def ppf(self, u: float) -> float:
        return -math.log1p(-u) / self.rate


@dataclass(frozen=True)
class Weibull:
    """F(t) = 1 - exp(-(t / scale) ** shape)"""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0):
            raise InputError(f"weibull shape and scale must be > 0, got {self.shape}, {self.scale}")

    breaks: T.ClassVar[T.Tuple[float, ...]] = ()

    def cdf(self, t: float) -> float:
        return -math.expm1(-((t / self.scale) ** self.shape))

    def sf(self, t: float) -> float:
        return math.exp(-((t / self.scale) ** self.shape))

    def pdf(self, t: float) -> float:
        if t == 0 and self.shape < 1:
            raise DifferentiabilityError(f"weibull density with shape {self.shape} < 1 is unbounded at t=0")
        z = t / self.scale
        return self.shape / self.scale * z ** (self.shape - 1) * math.exp(-(z**self.shape))

    def ppf(self, u: float) -> float:
        return self.scale * (-math.log1p(-u)) ** (1 / self.shape)


@dataclass(frozen=True)
class Empirical:
    """Survival table, linear between knots

    Survival starts at 1 (at the first time) and falls strictly to 0 at the
    last time; the density is constant between knots and undefined at them.
    """

    times: T.Tuple[float, ...]
    survival: T.Tuple[float, ...]

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        survival = tuple(float(s) for s in self.survival)
        if len(times) < 2 or len(times) != len(survival):
            raise InputError("empirical table needs >= 2 (time, survival) pairs of equal length")
        if times[0] < 0 or any(b <= a for a, b in zip(times, times[1:])):
            raise InputError(f"empirical times must be >= 0 and strictly increasing: {times}")
        if survival[0] != 1 or survival[-1] != 0:
            raise InputError("empirical survival must start at 1 and end at 0")
        if any(b >= a for a, b in zip(survival, survival[1:])):
            raise InputError(f"empirical survival must be strictly decreasing: {survival}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "survival", survival)

    @property
    def breaks(self) -> T.Tuple[float, ...]:
        return self.times

    def cdf(self, t: float) -> float:
        return 1.0 - self.sf(t)

    def sf(self, t: float) -> float:
        return float(np.interp(t, self.times, self.survival, left=1.0, right=0.0))

    def pdf(self, t: float) -> float:
        if t in self.times and t > 0:
            raise DifferentiabilityError(f"empirical survival has a kink at t={t}")
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        if k < 0 or k >= len(self.times) - 1:
            return 0.0
        drop = self.survival[k] - self.survival[k + 1]
        return drop / (self.times[k + 1] - self.times[k])

    def ppf(self, u: float) -> float:
        return float(np.interp(u, [1.0 - s for s in self.survival], self.times))


Distribution = T.Union[Exponential, Weibull, Empirical]


@dataclass(frozen=True)
class LifetimeModel:
    """independent lifetime distributions of components 1..n"""

    components: T.Tuple[Distribution, ...]

    @classmethod
    def iid(cls, distribution: Distribution, n: int) -> "LifetimeModel":
        """n components sharing one distribution"""
        return cls(tuple(distribution for _ in range(n)))

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Distribution:
        """distribution of component i (1-based)"""
        return self.components[i - 1]

    @property
    def breaks(self) -> T.Tuple[float, ...]:
        """every knot of every empirical component"""
        return tuple(sorted({b for d in self.components for b in d.breaks}))

    def survival(self, t: float) -> np.ndarray:
        """Q(t) componentwise"""
        return np.array([d.sf(t) for d in self.components])

    def failure(self, t: float) -> np.ndarray:
        """F(t) componentwise"""
        return np.array([d.cdf(t) for d in self.components])

    def density(self, t: float) -> np.ndarray:
        """f(t) componentwise"""
        return np.array([d.pdf(t) for d in self.components])


def fit_lifetimes(phi: StructureFunction, lifetimes: LifetimeModel) -> LifetimeModel:
    """checks one lifetime per component"""
    if len(lifetimes) != phi.n:
        raise DimensionError(f"{len(lifetimes)} lifetimes for a structure with n={phi.n}")
    return lifetimes


def _time(t: float, strict: bool = False) -> float:
    if t < 0 or (strict and t == 0) or math.isnan(t):
        raise InputError(f"time must be {'> 0' if strict else '>= 0'}, got {t}")
    return float(t)


def stieltjes(
    g: T.Callable[[float], float],
    distribution: Distribution,
    upper: float = math.inf,
    breaks: T.Iterable[float] = (),
    tolerance: float = TOLERANCE,
) -> float:
    """integral of g(t) dF(t) over [0, upper], evaluated on u = F(t)"""
    top = 1.0 if math.isinf(upper) else distribution.cdf(upper)
    if top <= 0:
        return 0.0
    points = sorted({u for u in map(distribution.cdf, breaks) if 0 < u < top})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, error = quad(
            lambda u: g(distribution.ppf(u)),
            0.0,
            top,
            points=points or None,
            epsabs=tolerance,
            epsrel=tolerance,
            limit=200,
        )
    if error > _FLOOR:
        raise QuadratureError("quadrature did not converge", error)
    if error > tolerance:
        warnings.warn(f"quadrature error estimate {error:.2g} above target {tolerance:g}")
    return float(value)


def system_survival(phi: StructureFunction, lifetimes: LifetimeModel, t: float) -> float:
    """Q(t) = h(Q_1(t), ..., Q_n(t))"""
    model = fit_lifetimes(phi, lifetimes)
    return reliability(phi, model.survival(_time(t)))


def _weights(phi: StructureFunction, model: LifetimeModel, t: float) -> np.ndarray:
    q = model.survival(t)
    pivotal = np.array([birnbaum(phi, q, k) for k in range(1, phi.n + 1)])
    return pivotal * model.density(t)


def system_density(phi: StructureFunction, lifetimes: LifetimeModel, t: float) -> float:
    """f(t) = -dQ/dt = sum_k B(k|Q(t)) f_k(t)"""
    model = fit_lifetimes(phi, lifetimes)
    return float(np.sum(_weights(phi, model, _time(t))))


def bp_instant(phi: StructureFunction, lifetimes: LifetimeModel, i: int, t: float) -> float:
    """probability that a system failure at exactly t was caused by component i"""
    check_component(phi, i)
    weights = _weights(phi, fit_lifetimes(phi, lifetimes), _time(t))
    total = float(np.sum(weights))
    if total <= 0:
        raise DegenerateError(f"no system failure density at t={t}")
    return float(weights[i - 1]) / total


def _causing(
    phi: StructureFunction, model: LifetimeModel, i: int, upper: float, tolerance: float
) -> float:
    """integral over [0, upper] of B(i|Q(u)) dF_i(u)"""
    g = lambda t: birnbaum(phi, model.survival(t), i)
    return stieltjes(g, model[i], upper, model.breaks, tolerance)


def bp_interval(
    phi: StructureFunction, lifetimes: LifetimeModel, i: int, t: float, tolerance: float = TOLERANCE
) -> float:
    """probability that i caused the system failure, given failure in [0, t]"""
    return bp_interval_all(phi, lifetimes, t, tolerance).value(check_component(phi, i))


def bp_interval_all(
    phi: StructureFunction, lifetimes: LifetimeModel, t: float, tolerance: float = TOLERANCE
) -> ImportanceReport:
    """bp_interval of every component, normalized by P{system fails in [0, t]}"""
    model = fit_lifetimes(phi, lifetimes)
    upper = _time(t, strict=True)
    causes = [_causing(phi, model, k, upper, tolerance) for k in range(1, phi.n + 1)]
    total = math.fsum(causes)
    if total <= 0:
        raise DegenerateError(f"the system cannot fail in [0, {t}]")
    return ImportanceReport("bp-interval", tuple(c / total for c in causes), normalization=total)


def bp_total(
    phi: StructureFunction, lifetimes: LifetimeModel, i: int, tolerance: float = TOLERANCE
) -> float:
    """probability that component i causes the system failure"""
    check_component(phi, i)
    return _causing(phi, fit_lifetimes(phi, lifetimes), i, math.inf, tolerance)


def bp_total_all(
    phi: StructureFunction, lifetimes: LifetimeModel, tolerance: float = TOLERANCE
) -> ImportanceReport:
    """bp_total of every component; normalization is their sum (1 up to quadrature)"""
    model = fit_lifetimes(phi, lifetimes)
    values = [_causing(phi, model, k, math.inf, tolerance) for k in range(1, phi.n + 1)]
    return ImportanceReport("bp-total", tuple(values), normalization=math.fsum(values))


def bp_instant_all(phi: StructureFunction, lifetimes: LifetimeModel, t: float) -> ImportanceReport:
    """bp_instant of every component at t"""
    values = [bp_instant(phi, lifetimes, k, t) for k in range(1, phi.n + 1)]
    return ImportanceReport("bp-instant", tuple(values))


def birnbaum_lifetime(phi: StructureFunction, lifetimes: LifetimeModel, i: int, t: float) -> float:
    """I_h^i(t) = h(1_i, Q(t)) - h(0_i, Q(t))"""
    model = fit_lifetimes(phi, lifetimes)
    return birnbaum(phi, model.survival(_time(t)), i)


def birnbaum_lifetime_all(phi: StructureFunction, lifetimes: LifetimeModel, t: float) -> ImportanceReport:
    """birnbaum_lifetime of every component at t"""
    values = [birnbaum_lifetime(phi, lifetimes, k, t) for k in range(1, phi.n + 1)]
    return ImportanceReport("birnbaum-lifetime", tuple(values))
