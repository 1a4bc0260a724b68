"""Probability laws, trapezoidal possibility distributions and their calculus.

Aleatory quantities are represented by small immutable distribution objects
that sample from an explicit :class:`numpy.random.Generator`. Epistemic
quantities are trapezoidal possibility distributions, handled through their
alpha-cuts and the possibility/necessity measures they induce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    ConfigurationError,
    MomentInfeasibleError,
    ParameterDomainError,
    UnsupportedOperationError,
)

__all__ = [
    "Beta",
    "Weibull",
    "Uniform",
    "DiscreteStates",
    "MarkovTwoState",
    "TrapezoidDensity",
    "Dirac",
    "ProbabilityModel",
    "Interval",
    "TrapezoidPossibility",
    "PossibilityEnvelope",
    "substream",
    "sample",
    "pdf",
    "fit_beta_moments",
    "markov_steady_state",
    "alpha_levels",
    "alpha_cut",
    "pos_measure",
    "nec_measure",
    "envelope_pos_below",
    "envelope_nec_below",
    "normalize_to_pdf",
]


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ParameterDomainError(f"{name} must be finite, got {value!r}")


def _check_positive(name, value):
    _check_finite(name, value)
    if value <= 0:
        raise ParameterDomainError(f"{name} must be strictly positive, got {value!r}")


def substream(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for Monte Carlo iteration ``index``.

    The Philox key is ``(seed, index)`` so every iteration owns an
    independent stream regardless of which worker evaluates it. ``stream``
    selects a disjoint counter segment within that key, letting one
    iteration keep several non-overlapping sequences.
    """
    if seed < 0 or index < 0 or stream < 0:
        raise ConfigurationError("seed, index and stream must be non-negative")
    key = np.array([seed, index], dtype=np.uint64)
    counter = np.array([0, 0, 0, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


# --------------------------------------------------------------------------
# probability laws
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Beta:
    """Beta law on [0, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("beta", self.beta)

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self):
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1.0))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.alpha, self.beta
        log_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        inside = (x >= 0.0) & (x <= 1.0)
        xc = np.clip(x, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = math.exp(log_norm) * xc ** (a - 1.0) * (1.0 - xc) ** (b - 1.0)
        out = np.where(inside, dens, 0.0)
        return out if out.ndim else float(out)

    def sample(self, rng, size=None):
        # Gamma-ratio construction
        g1 = rng.standard_gamma(self.alpha, size)
        g2 = rng.standard_gamma(self.beta, size)
        return g1 / (g1 + g2)


@dataclass(frozen=True)
class Weibull:
    """Two-parameter Weibull law; ``scale`` in the variable's unit."""

    scale: float
    shape: float

    def __post_init__(self):
        _check_positive("scale", self.scale)
        _check_positive("shape", self.shape)

    @property
    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        c, k = self.scale, self.shape
        z = np.clip(x, 0.0, None) / c
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (k / c) * z ** (k - 1.0) * np.exp(-(z**k))
        out = np.where(x >= 0.0, dens, 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.clip(x, 0.0, None) / self.scale
        out = -np.expm1(-(z**self.shape))
        return out if out.ndim else float(out)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        out = self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)
        return out if out.ndim else float(out)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        _check_finite("lo", self.lo)
        _check_finite("hi", self.hi)
        if not self.lo < self.hi:
            raise ParameterDomainError(f"uniform needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return out if out.ndim else float(out)

    def sample(self, rng, size=None):
        return self.lo + (self.hi - self.lo) * rng.random(size)


@dataclass(frozen=True)
class DiscreteStates:
    """Finite set of values with probabilities (e.g. a multi-state load)."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        if not values:
            raise ParameterDomainError("discrete states need at least one value")
        if len(values) != len(probs):
            raise ParameterDomainError(
                f"{len(values)} values but {len(probs)} probabilities"
            )
        for v in values:
            _check_finite("state value", v)
        if any(p < 0 or not math.isfinite(p) for p in probs):
            raise ParameterDomainError("state probabilities must be finite and >= 0")
        if abs(math.fsum(probs) - 1.0) > 1e-9:
            raise ParameterDomainError(
                f"state probabilities sum to {math.fsum(probs)!r}, expected 1"
            )

    @property
    def mean(self):
        return math.fsum(v * p for v, p in zip(self.values, self.probs))

    def pdf(self, x):
        raise UnsupportedOperationError("discrete states have no density")

    def sample(self, rng, size=None):
        u = rng.random(size)
        cum = np.cumsum(self.probs)
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(self.values) - 1)
        out = np.asarray(self.values)[idx]
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class MarkovTwoState:
    """Working/failed component with exponential failure and repair (rates per year).

    Non-sequential sampling draws from the steady state: 1.0 means working.
    """

    failure_rate: float
    repair_rate: float

    def __post_init__(self):
        _check_positive("failure_rate", self.failure_rate)
        _check_positive("repair_rate", self.repair_rate)

    @property
    def p_working(self):
        return markov_steady_state(self.failure_rate, self.repair_rate)[0]

    @property
    def mean(self):
        return self.p_working

    def pdf(self, x):
        raise UnsupportedOperationError("two-state Markov model has no density")

    def sample(self, rng, size=None):
        working = rng.random(size) < self.p_working
        return working.astype(float) if np.ndim(working) else float(working)


@dataclass(frozen=True)
class TrapezoidDensity:
    """Probability density proportional to a trapezoidal possibility distribution."""

    trapezoid: "TrapezoidPossibility"

    def __post_init__(self):
        t = self.trapezoid
        if not t.d > t.a:
            raise ParameterDomainError("normalisation needs a support of nonzero width")

    @property
    def area(self):
        t = self.trapezoid
        return 0.5 * ((t.d - t.a) + (t.c - t.b))

    @property
    def mean(self):
        # first moment of the trapezoid split into two triangles and a rectangle
        t = self.trapezoid
        left = 0.5 * (t.b - t.a) * (t.a + 2.0 * t.b) / 3.0
        mid = (t.c - t.b) * 0.5 * (t.b + t.c)
        right = 0.5 * (t.d - t.c) * (2.0 * t.c + t.d) / 3.0
        return (left + mid + right) / self.area

    def pdf(self, x):
        out = np.asarray(self.trapezoid.membership(x)) / self.area
        return out if out.ndim else float(out)

    def cdf(self, x):
        t, area = self.trapezoid, self.area
        x = np.clip(np.asarray(x, dtype=float), t.a, t.d)
        p1 = 0.5 * (t.b - t.a) / area
        with np.errstate(all="ignore"):
            left = np.where(t.b > t.a, (x - t.a) ** 2 / (2.0 * (t.b - t.a) * area), 0.0)
            right = np.where(
                t.d > t.c, 1.0 - (t.d - x) ** 2 / (2.0 * (t.d - t.c) * area), 1.0
            )
        mid = p1 + (x - t.b) / area
        out = np.where(x < t.b, left, np.where(x <= t.c, mid, right))
        return out if out.ndim else float(out)

    def ppf(self, u):
        t, area = self.trapezoid, self.area
        u = np.asarray(u, dtype=float)
        p1 = 0.5 * (t.b - t.a) / area
        p2 = p1 + (t.c - t.b) / area
        left = t.a + np.sqrt(np.clip(2.0 * area * (t.b - t.a) * u, 0.0, None))
        mid = t.b + (u - p1) * area
        right = t.d - np.sqrt(np.clip(2.0 * area * (t.d - t.c) * (1.0 - u), 0.0, None))
        out = np.where(u < p1, left, np.where(u <= p2, mid, right))
        out = np.clip(out, t.a, t.d)
        return out if out.ndim else float(out)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))


@dataclass(frozen=True)
class Dirac:
    """Point mass; sampling still consumes one draw so streams stay aligned."""

    value: float

    @property
    def mean(self):
        return self.value

    def pdf(self, x):
        raise UnsupportedOperationError("a point mass has no density")

    def cdf(self, x):
        out = (np.asarray(x, dtype=float) >= self.value).astype(float)
        return out if out.ndim else float(out)

    def sample(self, rng, size=None):
        u = rng.random(size)
        return np.full_like(u, self.value) if np.ndim(u) else float(self.value)


ProbabilityModel = Union[
    Beta, Weibull, Uniform, DiscreteStates, MarkovTwoState, TrapezoidDensity, Dirac
]


def sample(model: ProbabilityModel, rng: np.random.Generator, size=None):
    """Draw from ``model`` using the caller's generator."""
    return model.sample(rng, size)


def pdf(model: ProbabilityModel, x):
    return model.pdf(x)


def fit_beta_moments(mean: float, variance: float) -> tuple[float, float]:
    """Beta parameters matching a given mean and variance."""
    if not 0.0 < mean < 1.0:
        raise MomentInfeasibleError(f"beta mean must lie in (0, 1), got {mean!r}")
    if not variance > 0.0 or variance >= mean * (1.0 - mean):
        raise MomentInfeasibleError(
            f"variance {variance!r} infeasible for mean {mean!r}; "
            f"need 0 < variance < {mean * (1.0 - mean)!r}"
        )
    factor = mean * (1.0 - mean) / variance - 1.0
    return mean * factor, (1.0 - mean) * factor


def markov_steady_state(failure_rate: float, repair_rate: float) -> tuple[float, float]:
    """Steady-state (p_working, p_failed) of a two-state repairable component."""
    _check_positive("failure_rate", failure_rate)
    _check_positive("repair_rate", repair_rate)
    total = failure_rate + repair_rate
    return repair_rate / total, failure_rate / total


# --------------------------------------------------------------------------
# possibility distributions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ParameterDomainError("interval bounds must not be NaN")
        if self.lo > self.hi:
            raise ParameterDomainError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


@dataclass(frozen=True)
class TrapezoidPossibility:
    """Possibility distribution with support [a, d] and core [b, c]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            value = float(getattr(self, name))
            _check_finite(name, value)
            object.__setattr__(self, name, value)
        if not self.a <= self.b <= self.c <= self.d:
            raise ParameterDomainError(
                f"trapezoid needs a <= b <= c <= d, got {self.as_tuple()}"
            )

    @classmethod
    def crisp(cls, x: float) -> "TrapezoidPossibility":
        return cls(x, x, x, x)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def support(self) -> Interval:
        return Interval(self.a, self.d)

    @property
    def core(self) -> Interval:
        return Interval(self.b, self.c)

    @property
    def is_crisp(self) -> bool:
        return self.a == self.d

    def core_midpoint(self) -> float:
        return 0.5 * (self.b + self.c)

    def scaled(self, factor: float) -> "TrapezoidPossibility":
        if factor < 0:
            raise ParameterDomainError("scale factor must be non-negative")
        # + 0.0 turns -0.0 into 0.0 for empty blocks
        return TrapezoidPossibility(*(factor * v + 0.0 for v in self.as_tuple()))

    def membership(self, x):
        x = np.asarray(x, dtype=float)
        a, b, c, d = self.as_tuple()
        with np.errstate(all="ignore"):
            rise = np.where(b > a, (x - a) / (b - a), 0.0)
            fall = np.where(d > c, (d - x) / (d - c), 0.0)
        out = np.where(
            (x >= b) & (x <= c),
            1.0,
            np.where((x > a) & (x < b), rise, np.where((x > c) & (x < d), fall, 0.0)),
        )
        return out if out.ndim else float(out)

    def cuts(self, alphas):
        """Vectorised alpha-cut bounds for an array of levels."""
        alphas = np.asarray(alphas, dtype=float)
        lo = np.minimum(self.a + alphas * (self.b - self.a), self.b)
        hi = np.maximum(self.d - alphas * (self.d - self.c), self.c)
        # rounding must not leave the core at alpha = 1 or cross it below
        return np.where(alphas >= 1.0, self.b, lo), np.where(alphas >= 1.0, self.c, hi)


def alpha_levels(delta_alpha: float) -> np.ndarray:
    """Levels 0, delta, 2*delta, ..., 1; ``delta_alpha`` must divide 1."""
    if not 0.0 < delta_alpha <= 1.0:
        raise ConfigurationError(f"alpha step must lie in (0, 1], got {delta_alpha!r}")
    n = round(1.0 / delta_alpha)
    if abs(n * delta_alpha - 1.0) > 1e-9:
        raise ConfigurationError(f"alpha step {delta_alpha!r} does not divide 1 evenly")
    return np.arange(n + 1) / n


def alpha_cut(t: TrapezoidPossibility, alpha: float) -> Interval:
    """Closed alpha-cut; the 0-cut is taken as the closed support."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterDomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    lo, hi = t.cuts(alpha)
    return Interval(float(lo), float(hi))


def _sup_left_open(t, x):
    """sup of the distribution over (-inf, x)."""
    if x > t.b:
        return 1.0
    if x <= t.a:
        return 0.0
    return (x - t.a) / (t.b - t.a)


def _sup_right_open(t, x):
    """sup of the distribution over (x, inf)."""
    if x < t.c:
        return 1.0
    if x >= t.d:
        return 0.0
    return (t.d - x) / (t.d - t.c)


def pos_measure(t: TrapezoidPossibility, s: Interval) -> float:
    """Possibility of the closed interval ``s``."""
    if s.hi < t.a or s.lo > t.d:
        return 0.0
    if s.hi >= t.b and s.lo <= t.c:
        return 1.0
    # the interval sits entirely on one flank; sup is at its nearest end
    if s.hi < t.b:
        return float(t.membership(s.hi))
    return float(t.membership(s.lo))


def nec_measure(t: TrapezoidPossibility, s: Interval) -> float:
    """Necessity of the closed interval ``s``: one minus sup over its complement."""
    return 1.0 - max(_sup_left_open(t, s.lo), _sup_right_open(t, s.hi))


@dataclass(frozen=True)
class PossibilityEnvelope:
    """Nested stack of alpha-cut intervals approximating an output possibility distribution."""

    alphas: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        arrays = []
        for name in ("alphas", "lower", "upper"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            arrays.append(arr)
        alphas, lower, upper = arrays
        if alphas.ndim != 1 or lower.shape != alphas.shape or upper.shape != alphas.shape:
            raise ParameterDomainError("alphas, lower and upper must be equal-length vectors")
        if alphas[0] != 0.0 or alphas[-1] != 1.0 or np.any(np.diff(alphas) <= 0):
            raise ParameterDomainError("alphas must increase strictly from 0 to 1")
        if np.any(lower > upper):
            raise ParameterDomainError("every cut needs lower <= upper")
        if np.any(np.diff(lower) < 0) or np.any(np.diff(upper) > 0):
            raise ParameterDomainError("alpha-cuts are not nested")

    @classmethod
    def from_trapezoid(cls, t: TrapezoidPossibility, delta_alpha: float):
        alphas = alpha_levels(delta_alpha)
        lower, upper = t.cuts(alphas)
        return cls(alphas, lower, upper)

    @property
    def levels(self):
        return [
            (float(a), Interval(float(lo), float(hi)))
            for a, lo, hi in zip(self.alphas, self.lower, self.upper)
        ]

    @property
    def support(self) -> Interval:
        return Interval(float(self.lower[0]), float(self.upper[0]))

    @property
    def core(self) -> Interval:
        return Interval(float(self.lower[-1]), float(self.upper[-1]))


def pos_below(alphas, lower, y):
    """Pos((-inf, y]) for nested stacks; ``lower`` is (..., L), ``y`` is (T,)."""
    y = np.asarray(y, dtype=float)
    lower = np.atleast_2d(lower)
    out = np.empty((lower.shape[0], y.size))
    for i, row in enumerate(lower):
        # lower bounds are nondecreasing in alpha, so a count locates the top level
        k = np.searchsorted(row, y, side="right")
        out[i] = np.where(k > 0, alphas[np.maximum(k - 1, 0)], 0.0)
    return out


def nec_below(alphas, upper, y):
    """Nec((-inf, y]) = 1 - sup of levels whose upper bound exceeds y."""
    y = np.asarray(y, dtype=float)
    upper = np.atleast_2d(upper)
    out = np.empty((upper.shape[0], y.size))
    for i, row in enumerate(upper):
        k = np.searchsorted(-row, -y, side="left")
        out[i] = 1.0 - np.where(k > 0, alphas[np.maximum(k - 1, 0)], 0.0)
    return out


def envelope_pos_below(e: PossibilityEnvelope, y: float) -> float:
    return float(pos_below(e.alphas, e.lower, [y])[0, 0])


def envelope_nec_below(e: PossibilityEnvelope, y: float) -> float:
    return float(nec_below(e.alphas, e.upper, [y])[0, 0])


def normalize_to_pdf(t: TrapezoidPossibility):
    """Probability law whose density is the possibility distribution scaled to unit area.

    A crisp trapezoid maps to a point mass.
    """
    if t.is_crisp:
        return Dirac(t.a)
    return TrapezoidDensity(t)
