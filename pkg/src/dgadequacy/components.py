"""Component power models of the distributed-generation system.

Each generator type exposes a point-value power function that broadcasts over
numpy arrays, and an extrema function returning the exact output range when
the epistemic parameters vary over their alpha-cuts with the aleatory input
held fixed. Extrema come from evaluating every vertex of the alpha-cut box;
both power functions are monotone in each parameter with the others fixed,
so the optimum over the box sits at a vertex. ``solar_grid_extrema`` and
``wind_grid_extrema`` are brute-force grid oracles kept for validation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import IngestionError, ParameterDomainError
from .uncertainty import (
    DiscreteStates,
    Interval,
    MarkovTwoState,
    TrapezoidPossibility,
    alpha_cut,
)

SOLAR_FIELDS = ("i_mpp", "v_mpp", "v_oc", "i_sc", "t_a", "n_ot", "k_c", "k_v")
WIND_FIELDS = ("v_ci", "v_co", "v_r", "p_r")


class SolarPoint(NamedTuple):
    """Point values of the solar unit parameters; fields may be arrays."""

    i_mpp: float
    v_mpp: float
    v_oc: float
    i_sc: float
    t_a: float
    n_ot: float
    k_c: float
    k_v: float
    n_cells: int


class WindPoint(NamedTuple):
    v_ci: float
    v_co: float
    v_r: float
    p_r: float


@dataclass(frozen=True)
class SolarParams:
    """Epistemic description of one solar array.

    Currents in A, voltages in V, temperatures in degC, ``k_c`` in A/degC and
    ``k_v`` in V/degC. ``n_cells`` multiplies the per-unit electrical output.
    """

    i_mpp: TrapezoidPossibility
    v_mpp: TrapezoidPossibility
    v_oc: TrapezoidPossibility
    i_sc: TrapezoidPossibility
    t_a: TrapezoidPossibility
    n_ot: TrapezoidPossibility
    k_c: TrapezoidPossibility
    k_v: TrapezoidPossibility
    n_cells: int

    def __post_init__(self):
        problems = []
        for name in ("i_mpp", "v_mpp", "v_oc", "i_sc", "k_c", "k_v"):
            if getattr(self, name).a <= 0:
                problems.append(f"{name}: support must be strictly positive")
        if not all(
            o > m for o, m in zip(self.v_oc.as_tuple(), self.v_mpp.as_tuple())
        ):
            problems.append("v_oc: must exceed v_mpp pointwise")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            problems.append("n_cells: must be a positive integer")
        if problems:
            raise ParameterDomainError("; ".join(problems))

    def trapezoids(self):
        return [getattr(self, name) for name in SOLAR_FIELDS]

    def point(self, chooser) -> SolarPoint:
        """Point values obtained by applying ``chooser`` to each trapezoid."""
        return SolarPoint(*(chooser(t) for t in self.trapezoids()), self.n_cells)

    def replace_trapezoids(self, fn) -> "SolarParams":
        return SolarParams(*(fn(t) for t in self.trapezoids()), self.n_cells)


@dataclass(frozen=True)
class WindParams:
    """Epistemic description of one wind turbine; speeds in m/s, ``p_r`` in kW."""

    v_ci: TrapezoidPossibility
    v_co: TrapezoidPossibility
    v_r: TrapezoidPossibility
    p_r: TrapezoidPossibility

    def __post_init__(self):
        problems = []
        if not self.v_ci.d < self.v_r.a:
            problems.append("v_r: support must lie above the v_ci support")
        if not self.v_r.d < self.v_co.a:
            problems.append("v_co: support must lie above the v_r support")
        if self.p_r.a <= 0:
            problems.append("p_r: support must be strictly positive")
        if problems:
            raise ParameterDomainError("; ".join(problems))

    def trapezoids(self):
        return [getattr(self, name) for name in WIND_FIELDS]

    def point(self, chooser) -> WindPoint:
        return WindPoint(*(chooser(t) for t in self.trapezoids()))

    def replace_trapezoids(self, fn) -> "WindParams":
        return WindParams(*(fn(t) for t in self.trapezoids()))


@dataclass(frozen=True)
class EVBlock:
    """Aggregated electric vehicles; positive power is injection into the grid."""

    per_vehicle: TrapezoidPossibility
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 0:
            raise ParameterDomainError("count: must be a non-negative integer")


@dataclass(frozen=True)
class TransformerModel:
    capacity: float
    failure_rate: float
    repair_rate: float
    fluct_lo: float = 0.8
    fluct_hi: float = 1.0

    def __post_init__(self):
        if not self.capacity > 0:
            raise ParameterDomainError("capacity: must be positive")
        if not 0 < self.fluct_lo < self.fluct_hi <= 1:
            raise ParameterDomainError("fluctuation band: need 0 < lo < hi <= 1")
        # validates the rates
        self.state_model()

    def state_model(self) -> MarkovTwoState:
        return MarkovTwoState(self.failure_rate, self.repair_rate)


@dataclass(frozen=True)
class LoadModel:
    states: DiscreteStates
    n_states: int = 10

    def __post_init__(self):
        if any(v < 0 for v in self.states.values):
            raise ParameterDomainError("load state values must be non-negative")
        if self.n_states < 1:
            raise ParameterDomainError("n_states must be at least 1")


# --------------------------------------------------------------------------
# point models
# --------------------------------------------------------------------------


def solar_power(s, p: SolarPoint):
    """Array output in kW for per-unit irradiance ``s``."""
    denom = np.asarray(p.v_oc) * np.asarray(p.i_sc)
    if np.any(denom <= 0):
        raise ParameterDomainError("v_oc * i_sc must be positive")
    t_cell = p.t_a + s * (p.n_ot - 20.0) / 0.8
    current = s * (p.i_sc + p.k_c * (t_cell - 25.0))
    voltage = p.v_oc - p.k_v * t_cell
    fill_factor = (p.v_mpp * p.i_mpp) / denom
    # V * A gives watts
    return p.n_cells * fill_factor * voltage * current / 1000.0


def wind_power(v, p: WindPoint):
    """Turbine output in kW at wind speed ``v`` (m/s)."""
    if np.any(np.asarray(p.v_r) <= np.asarray(p.v_ci)):
        raise ParameterDomainError("rated speed must exceed cut-in speed")
    v = np.asarray(v, dtype=float)
    ramp = p.p_r * (v - p.v_ci) / (p.v_r - p.v_ci)
    out = np.where(
        (v < p.v_ci) | (v >= p.v_co),
        0.0,
        np.where(v < p.v_r, ramp, p.p_r * np.ones_like(v)),
    )
    return out if out.ndim else float(out)


def ev_block_possibility(b: EVBlock) -> TrapezoidPossibility:
    """Block output distribution; vehicles are fully dependent, so the trapezoid scales."""
    return b.per_vehicle.scaled(b.count)


def transformer_power(t: TransformerModel, working, u):
    """Transformer output in kW given its state and a uniform draw for grid fluctuation."""
    level = t.fluct_lo + u * (t.fluct_hi - t.fluct_lo)
    out = np.where(np.asarray(working) > 0, t.capacity * level, 0.0)
    return out if out.ndim else float(out)


def load_states_from_hourly(hourly, n_states: int = 10) -> LoadModel:
    """Equal-width histogram of an hourly load series.

    Each state sits at the midpoint of its bin with probability equal to the
    fraction of hours falling in it. A constant series yields one state.
    """
    series = np.asarray(hourly, dtype=float)
    if series.size == 0:
        raise IngestionError("load series is empty")
    if n_states < 1:
        raise ParameterDomainError("n_states must be at least 1")
    lo, hi = float(series.min()), float(series.max())
    if lo == hi:
        return LoadModel(DiscreteStates((lo,), (1.0,)), n_states)
    counts, edges = np.histogram(series, bins=n_states, range=(lo, hi))
    mids = 0.5 * (edges[:-1] + edges[1:])
    probs = counts / series.size
    return LoadModel(DiscreteStates(tuple(mids), tuple(probs)), n_states)


def adequacy(p_t, p_s, p_w, p_ev, p_l):
    """Generation surplus over load (kW); negative means unserved demand."""
    return p_t + p_s + p_w + p_ev - p_l


# --------------------------------------------------------------------------
# extrema over alpha-cut boxes
# --------------------------------------------------------------------------


def _vertices(trapezoids, alpha):
    """All corner combinations of the alpha-cut box, one array per parameter."""
    cuts = [alpha_cut(t, alpha) for t in trapezoids]
    corners = np.array(list(itertools.product(*[(c.lo, c.hi) for c in cuts])))
    return corners.T


def solar_vertices(params: SolarParams, alpha: float) -> SolarPoint:
    return SolarPoint(*_vertices(params.trapezoids(), alpha), params.n_cells)


def wind_vertices(params: WindParams, alpha: float) -> WindPoint:
    return WindPoint(*_vertices(params.trapezoids(), alpha))


def solar_extrema_arrays(s, params: SolarParams, alpha: float):
    """Vectorised extrema: ``s`` of shape (n,) gives two (n,) arrays."""
    s = np.asarray(s, dtype=float)[..., None]
    values = solar_power(s, solar_vertices(params, alpha))
    return values.min(axis=-1), values.max(axis=-1)


def wind_extrema_arrays(v, params: WindParams, alpha: float):
    # A cut-in or cut-out cut that straddles v makes the zero regime reachable;
    # the cut endpoints are vertices, so enumeration already includes it.
    v = np.asarray(v, dtype=float)[..., None]
    values = wind_power(v, wind_vertices(params, alpha))
    return values.min(axis=-1), values.max(axis=-1)


def solar_power_extrema(s: float, params: SolarParams, alpha: float) -> Interval:
    lo, hi = solar_extrema_arrays(s, params, alpha)
    return Interval(float(lo), float(hi))


def wind_power_extrema(v: float, params: WindParams, alpha: float) -> Interval:
    lo, hi = wind_extrema_arrays(v, params, alpha)
    return Interval(float(lo), float(hi))


def solar_grid_extrema(s: float, params: SolarParams, alpha: float, points: int = 9):
    """Exact min/max of ``solar_power`` over a regular grid on the alpha-cut box.

    The output factorises as ``(v_mpp * i_mpp) * rest``, where ``rest`` does
    not involve v_mpp or i_mpp. The extremes of a product of two independent
    finite sets are among the four products of their extremes, so the full
    ``points**8`` grid is covered with ``points**2 + points**6`` evaluations.
    No monotonicity is assumed.
    """
    axes = {
        name: np.linspace(*_cut_bounds(getattr(params, name), alpha), points)
        for name in SOLAR_FIELDS
    }
    vi = np.multiply.outer(axes["v_mpp"], axes["i_mpp"]).ravel()
    grids = np.meshgrid(
        axes["v_oc"], axes["i_sc"], axes["t_a"], axes["n_ot"], axes["k_c"], axes["k_v"],
        indexing="ij", sparse=True,
    )
    v_oc, i_sc, t_a, n_ot, k_c, k_v = grids
    rest = solar_power(
        s, SolarPoint(1.0, 1.0, v_oc, i_sc, t_a, n_ot, k_c, k_v, params.n_cells)
    )
    r_lo, r_hi = float(rest.min()), float(rest.max())
    a_lo, a_hi = float(vi.min()), float(vi.max())
    products = [a_lo * r_lo, a_lo * r_hi, a_hi * r_lo, a_hi * r_hi]
    return Interval(min(products), max(products))


def wind_grid_extrema(v: float, params: WindParams, alpha: float, points: int = 30):
    """Min/max of ``wind_power`` over the full regular grid on the alpha-cut box."""
    axes = [np.linspace(*_cut_bounds(t, alpha), points) for t in params.trapezoids()]
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    values = wind_power(np.asarray(v, dtype=float), WindPoint(*grids))
    return Interval(float(np.min(values)), float(np.max(values)))


def _cut_bounds(t, alpha):
    cut = alpha_cut(t, alpha)
    return cut.lo, cut.hi
