"""Hybrid (Monte Carlo + alpha-cut) and pure probabilistic adequacy propagation.

Every Monte Carlo iteration draws from its own counter-based substream keyed
by ``(seed, iteration)``, so results do not depend on how iterations are
split across worker processes. Within an iteration the aleatory draws always
consume the same slots, in this order: transformer state, grid fluctuation,
load state, wind speed, irradiance. The probabilistic engine takes its
epistemic draws from a second, disjoint substream of the same key, which
keeps its aleatory sample identical to the hybrid engine's for a shared seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .components import (
    SolarPoint,
    WindPoint,
    adequacy,
    ev_block_possibility,
    solar_extrema_arrays,
    solar_grid_extrema,
    solar_power,
    transformer_power,
    wind_extrema_arrays,
    wind_grid_extrema,
    wind_power,
)
from .errors import AdequacyError, ConfigurationError, ParameterDomainError, PropagationError
from .uncertainty import (
    PossibilityEnvelope,
    alpha_levels,
    nec_below,
    normalize_to_pdf,
    pos_below,
    substream,
)

ALEATORY_STREAM = 0
EPISTEMIC_STREAM = 1


class ExtremaValidationError(AdequacyError):
    """Vertex extrema disagree with the grid-search oracle."""


@dataclass(frozen=True)
class HybridResult:
    """One nested alpha-cut stack per Monte Carlo realisation.

    ``lower`` and ``upper`` have shape (m, levels); row i is the output
    possibility distribution of realisation i.
    """

    alphas: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    weights: np.ndarray
    seed: int
    delta_alpha: float

    def __post_init__(self):
        if self.lower.shape != self.upper.shape or self.lower.shape[1] != self.alphas.size:
            raise ConfigurationError("envelope arrays do not match the alpha grid")
        if self.lower.shape[0] < 1:
            raise ConfigurationError("a hybrid result needs at least one realisation")
        if self.weights.shape != (self.lower.shape[0],):
            raise ConfigurationError("one weight per realisation is required")
        if abs(math.fsum(self.weights) - 1.0) > 1e-9:
            raise ConfigurationError("realisation weights must sum to 1")

    @property
    def m(self) -> int:
        return self.lower.shape[0]

    @property
    def run_meta(self) -> dict:
        return {"m": self.m, "delta_alpha": self.delta_alpha, "seed": self.seed}

    def envelope(self, i: int) -> PossibilityEnvelope:
        return PossibilityEnvelope(self.alphas, self.lower[i], self.upper[i])

    @property
    def envelopes(self) -> list[PossibilityEnvelope]:
        return [self.envelope(i) for i in range(self.m)]

    def centers(self) -> np.ndarray:
        """Midpoints of the core (alpha = 1) intervals."""
        return 0.5 * (self.lower[:, -1] + self.upper[:, -1])


@dataclass(frozen=True)
class ProbabilisticResult:
    samples: np.ndarray
    seed: int
    _sorted: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_sorted", np.sort(self.samples))

    @property
    def m(self) -> int:
        return self.samples.size

    def cdf(self, y):
        """Empirical P(adequacy <= y)."""
        counts = np.searchsorted(self._sorted, np.asarray(y, dtype=float), side="right")
        return counts / self.m


@dataclass(frozen=True)
class EvidenceCurves:
    """Belief, plausibility and (optionally) baseline CDF of {adequacy <= y}."""

    thresholds: np.ndarray
    bel: np.ndarray | None
    pl: np.ndarray | None
    cdf: np.ndarray | None = None


@dataclass(frozen=True)
class UnavailabilityReport:
    penetration_label: str
    pl: float | None
    bel: float | None
    prob: float | None = None


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def draw_aleatory(scenario, seed: int, start: int, stop: int) -> dict:
    """Aleatory inputs of iterations ``start`` to ``stop - 1``."""
    state_model = scenario.transformer.state_model()
    keys = ("working", "fluct_u", "load_kw", "wind_speed", "irradiance")
    out = {k: np.empty(stop - start) for k in keys}
    for row, i in enumerate(range(start, stop)):
        rng = substream(seed, i, ALEATORY_STREAM)
        out["working"][row] = state_model.sample(rng)
        out["fluct_u"][row] = rng.random()
        out["load_kw"][row] = scenario.load.states.sample(rng)
        out["wind_speed"][row] = scenario.wind_speed.sample(rng)
        out["irradiance"][row] = scenario.irradiance.sample(rng)
    out["transformer_kw"] = transformer_power(scenario.transformer, out["working"], out["fluct_u"])
    return out


def _epistemic_models(scenario):
    solar = [normalize_to_pdf(t) for t in scenario.solar_fleet.unit_params.trapezoids()]
    wind = [normalize_to_pdf(t) for t in scenario.wind_fleet.unit_params.trapezoids()]
    ev = normalize_to_pdf(ev_block_possibility(scenario.ev_block))
    return solar, wind, ev


def draw_epistemic(scenario, seed: int, start: int, stop: int):
    """Point parameters drawn from the normalised possibility distributions."""
    solar_models, wind_models, ev_model = _epistemic_models(scenario)
    n = stop - start
    solar = np.empty((len(solar_models), n))
    wind = np.empty((len(wind_models), n))
    ev = np.empty(n)
    for row, i in enumerate(range(start, stop)):
        rng = substream(seed, i, EPISTEMIC_STREAM)
        for k, model in enumerate(solar_models):
            solar[k, row] = model.sample(rng)
        for k, model in enumerate(wind_models):
            wind[k, row] = model.sample(rng)
        ev[row] = ev_model.sample(rng)
    return solar, wind, ev


# --------------------------------------------------------------------------
# engines
# --------------------------------------------------------------------------


def _hybrid_block(scenario, seed, start, stop, alphas):
    draws = draw_aleatory(scenario, seed, start, stop)
    solar, wind = scenario.solar_fleet, scenario.wind_fleet
    ev_possibility = ev_block_possibility(scenario.ev_block)
    ev_lo, ev_hi = ev_possibility.cuts(alphas)
    lower = np.empty((stop - start, alphas.size))
    upper = np.empty_like(lower)
    for j, alpha in enumerate(alphas):
        s_lo, s_hi = solar_extrema_arrays(draws["irradiance"], solar.unit_params, alpha)
        w_lo, w_hi = wind_extrema_arrays(draws["wind_speed"], wind.unit_params, alpha)
        lower[:, j] = adequacy(
            draws["transformer_kw"], solar.count * s_lo, wind.count * w_lo, ev_lo[j], draws["load_kw"]
        )
        upper[:, j] = adequacy(
            draws["transformer_kw"], solar.count * s_hi, wind.count * w_hi, ev_hi[j], draws["load_kw"]
        )
    # rounding can break nesting at the last ulp; the exact extrema are nested
    np.maximum.accumulate(lower, axis=1, out=lower)
    np.minimum.accumulate(upper, axis=1, out=upper)
    return lower, upper


def _probabilistic_block(scenario, seed, start, stop, epistemic_seed):
    draws = draw_aleatory(scenario, seed, start, stop)
    solar_pts, wind_pts, ev = draw_epistemic(scenario, epistemic_seed, start, stop)
    solar, wind = scenario.solar_fleet, scenario.wind_fleet
    solar_point = SolarPoint(*solar_pts, solar.unit_params.n_cells)
    wind_point = WindPoint(*wind_pts)
    # same elementwise arithmetic as the hybrid engine, so crisp inputs agree exactly
    p_s = solar.count * solar_power(draws["irradiance"], solar_point)
    p_w = wind.count * wind_power(draws["wind_speed"], wind_point)
    return (adequacy(draws["transformer_kw"], p_s, p_w, ev, draws["load_kw"]),)


def _run_block(args):
    fn, scenario, seed, start, stop, extra = args
    try:
        return fn(scenario, seed, start, stop, extra)
    except ParameterDomainError as exc:
        for i in range(start, stop):
            try:
                fn(scenario, seed, i, i + 1, extra)
            except ParameterDomainError as inner:
                raise PropagationError(i, inner) from inner
        raise PropagationError(start, exc) from exc


def _blocks(m, workers):
    n_blocks = max(1, min(workers, m))
    edges = np.linspace(0, m, n_blocks + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _execute(fn, scenario, seed, m, workers, extra):
    if m < 1:
        raise ConfigurationError(f"sample count must be >= 1, got {m}")
    if workers < 1:
        raise ConfigurationError(f"worker count must be >= 1, got {workers}")
    tasks = [(fn, scenario, seed, a, b, extra) for a, b in _blocks(m, workers)]
    if len(tasks) == 1:
        parts = [_run_block(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
            parts = list(pool.map(_run_block, tasks))
    # ordered reduction by iteration index
    return [np.concatenate(arrays) for arrays in zip(*parts)]


def hybrid_propagate(
    scenario,
    m: int = 1000,
    delta_alpha: float = 0.02,
    seed: int = 0,
    workers: int = 1,
    validate_extrema: bool = False,
) -> HybridResult:
    """Fuzzy-random adequacy: one nested alpha-cut stack per aleatory realisation.

    For each iteration the aleatory inputs are sampled, then for every alpha
    level the adequacy interval is the sum of per-component extrema over the
    alpha-cut box (the components share no parameters) plus the sampled
    crisp terms. Identical units share one parameter set, so a fleet's range
    is the unit range times the unit count.
    """
    alphas = alpha_levels(delta_alpha)
    lower, upper = _execute(_hybrid_block, scenario, seed, m, workers, alphas)
    if validate_extrema:
        check_extrema(scenario, seed, alphas, iterations=min(m, 3))
    weights = np.full(m, 1.0 / m)
    return HybridResult(alphas, lower, upper, weights, seed, delta_alpha)


def probabilistic_propagate(
    scenario, m: int = 1000, seed: int = 0, workers: int = 1, epistemic_seed: int | None = None
) -> ProbabilisticResult:
    """Plain Monte Carlo with every trapezoid normalised into a density.

    With ``epistemic_seed`` left as None the epistemic draws use ``seed``;
    the aleatory draws always use ``seed`` and therefore match
    :func:`hybrid_propagate` run with the same seed.
    """
    extra = seed if epistemic_seed is None else epistemic_seed
    (samples,) = _execute(_probabilistic_block, scenario, seed, m, workers, extra)
    return ProbabilisticResult(samples, seed)


def check_extrema(scenario, seed, alphas, iterations=3, rel_tol=0.005):
    """Compare vertex extrema with the grid oracles on a few sampled states."""
    draws = draw_aleatory(scenario, seed, 0, iterations)
    solar = scenario.solar_fleet.unit_params
    wind = scenario.wind_fleet.unit_params
    probe = sorted({float(alphas[0]), float(alphas[len(alphas) // 2]), float(alphas[-1])})
    for i in range(iterations):
        s, v = draws["irradiance"][i], draws["wind_speed"][i]
        for alpha in probe:
            pairs = (
                ("solar", solar_extrema_arrays(s, solar, alpha), solar_grid_extrema(s, solar, alpha)),
                ("wind", wind_extrema_arrays(v, wind, alpha), wind_grid_extrema(v, wind, alpha)),
            )
            for label, (lo, hi), grid in pairs:
                tol = rel_tol * float(hi - lo) + 1e-9
                if grid.lo < lo - tol or grid.hi > hi + tol:
                    raise ExtremaValidationError(
                        f"{label} extrema at iteration {i}, alpha {alpha}: vertex "
                        f"[{float(lo)}, {float(hi)}] vs grid [{grid.lo}, {grid.hi}]"
                    )


# --------------------------------------------------------------------------
# evidence aggregation
# --------------------------------------------------------------------------


def _weighted_mean(weights, values):
    # uniform weights use a plain mean so 0/1 values give exactly count / m
    if np.all(weights == weights[0]):
        return values.mean(axis=0)
    return weights @ values


def evidence_curves(
    result: HybridResult | None, thresholds, baseline: ProbabilisticResult | None = None
) -> EvidenceCurves:
    """Pl(y) and Bel(y) of {adequacy <= y} on a sorted threshold grid."""
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.ndim != 1 or thresholds.size == 0 or np.any(np.diff(thresholds) < 0):
        raise ConfigurationError("thresholds must be a non-empty sorted sequence")
    bel = pl = None
    if result is not None:
        pos = pos_below(result.alphas, result.lower, thresholds)
        nec = nec_below(result.alphas, result.upper, thresholds)
        pl = _weighted_mean(result.weights, pos)
        bel = _weighted_mean(result.weights, nec)
    cdf = baseline.cdf(thresholds) if baseline is not None else None
    return EvidenceCurves(thresholds, bel, pl, cdf)


def default_thresholds(
    result=None, baseline=None, n: int = 401, pad: float = 0.01, include=()
) -> np.ndarray:
    """Evenly spaced grid over every envelope support (and baseline sample), padded.

    ``include`` lists extra values the span must reach, e.g. 0 so that
    unavailability can always be read off the curves.
    """
    lows, highs = list(include), list(include)
    if result is not None:
        lows.append(result.lower[:, 0].min())
        highs.append(result.upper[:, 0].max())
    if baseline is not None:
        lows.append(baseline.samples.min())
        highs.append(baseline.samples.max())
    if result is None and baseline is None:
        raise ConfigurationError("need a result to derive a threshold grid")
    lo, hi = float(min(lows)), float(max(highs))
    margin = pad * (hi - lo) if hi > lo else max(1.0, pad * abs(lo))
    return np.linspace(lo - margin, hi + margin, n)


def unavailability(curves: EvidenceCurves, label: str = "") -> UnavailabilityReport:
    """Bel, Pl and baseline probability of {adequacy < 0}, read at threshold 0.

    Values are taken at 0 when it is on the grid and interpolated linearly
    between the bracketing thresholds otherwise.
    """
    thr = curves.thresholds
    if not thr[0] <= 0.0 <= thr[-1]:
        raise ConfigurationError("threshold grid must cover 0 to report unavailability")

    def at_zero(values):
        return None if values is None else float(np.interp(0.0, thr, values))

    return UnavailabilityReport(label, at_zero(curves.pl), at_zero(curves.bel), at_zero(curves.cdf))
