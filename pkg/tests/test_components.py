import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgadequacy.components import (
    SOLAR_FIELDS,
    WIND_FIELDS,
    EVBlock,
    SolarParams,
    SolarPoint,
    TransformerModel,
    WindParams,
    WindPoint,
    adequacy,
    ev_block_possibility,
    load_states_from_hourly,
    solar_grid_extrema,
    solar_power,
    solar_power_extrema,
    transformer_power,
    wind_grid_extrema,
    wind_power,
    wind_power_extrema,
)
from dgadequacy.errors import IngestionError, ParameterDomainError
from dgadequacy.loadcurve import bundled_rts_load
from dgadequacy.scenario import SOLAR_UNIT, WIND_UNIT
from dgadequacy.uncertainty import Interval, TrapezoidPossibility, alpha_cut, substream
from helpers import alphas

SOLAR = SolarParams(**{k: TrapezoidPossibility(*v) for k, v in SOLAR_UNIT.items()}, n_cells=1000)
WIND = WindParams(**{k: TrapezoidPossibility(*v) for k, v in WIND_UNIT.items()})

EXAMPLE_POINT = SolarPoint(
    i_mpp=4.71, v_mpp=17.17, v_oc=21.48, i_sc=5.27, t_a=30.0, n_ot=42.5, k_c=0.00122, k_v=0.0139, n_cells=1000
)
WIND_POINT = WindPoint(v_ci=3.25, v_co=49.5, v_r=11.25, p_r=150.0)


def random_box_points(params, fields, alpha, rng, n):
    cuts = [alpha_cut(getattr(params, f), alpha) for f in fields]
    return [rng.uniform(c.lo, c.hi, n) for c in cuts]


# -- solar ---------------------------------------------------------------------


def test_solar_example_by_hand():
    s = 0.5
    t_cell = 30.0 + s * (42.5 - 20.0) / 0.8
    assert t_cell == pytest.approx(44.0625)
    current = s * (5.27 + 0.00122 * (t_cell - 25.0))
    voltage = 21.48 - 0.0139 * t_cell
    ff = 17.17 * 4.71 / (21.48 * 5.27)
    assert ff == pytest.approx(0.7144, abs=1e-4)
    expected_kw = 1000 * ff * voltage * current / 1000.0
    assert expected_kw == pytest.approx(39.46, abs=0.005)
    assert solar_power(s, EXAMPLE_POINT) == pytest.approx(expected_kw, rel=1e-12)


def test_solar_zero_irradiance():
    assert solar_power(0.0, EXAMPLE_POINT) == 0.0


def test_solar_linear_in_cell_count():
    doubled = EXAMPLE_POINT._replace(n_cells=2000)
    assert solar_power(0.5, doubled) == 2 * solar_power(0.5, EXAMPLE_POINT)


def test_solar_peak_near_nameplate():
    # one 1000-module array near its 75 kW rating at full sun
    assert 60.0 < solar_power(1.0, SOLAR.point(lambda t: t.core_midpoint())) < 90.0


def test_solar_rejects_nonpositive_denominator():
    with pytest.raises(ParameterDomainError):
        solar_power(0.5, EXAMPLE_POINT._replace(i_sc=0.0))


def test_solar_nonnegative_over_support_box():
    rng = substream(3, 0)
    pts = random_box_points(SOLAR, SOLAR_FIELDS, 0.0, rng, 100_000)
    s = rng.random(100_000)
    assert np.all(solar_power(s, SolarPoint(*pts, 1000)) >= 0.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"i_mpp": TrapezoidPossibility(-1.0, 4.0, 5.0, 6.0)},
        {"v_oc": TrapezoidPossibility(15.0, 17.0, 19.0, 20.0)},
        {"n_cells": 0},
    ],
)
def test_solar_params_invariants(kwargs):
    fields = {k: getattr(SOLAR, k) for k in SOLAR_FIELDS}
    fields["n_cells"] = 1000
    fields.update(kwargs)
    with pytest.raises(ParameterDomainError):
        SolarParams(**fields)


# -- wind ----------------------------------------------------------------------


@pytest.mark.parametrize("v,expected", [(2.0, 0.0), (7.25, 75.0), (20.0, 150.0), (49.5, 0.0), (60.0, 0.0)])
def test_wind_power_examples(v, expected):
    assert wind_power(v, WIND_POINT) == pytest.approx(expected, abs=1e-12)


def test_wind_ramp_fraction_oracle():
    assert (7.25 - 3.25) / (11.25 - 3.25) == 0.5


def test_wind_rejects_rated_below_cut_in():
    with pytest.raises(ParameterDomainError):
        wind_power(5.0, WIND_POINT._replace(v_r=3.0))


def test_wind_shape():
    v = np.linspace(0.0, 60.0, 60_001)
    p = wind_power(v, WIND_POINT)
    assert np.all(p <= WIND_POINT.p_r)
    jumps = np.abs(np.diff(p))
    # one jump at cut-out; the ramp step is tiny
    assert np.sum(jumps > 1.0) == 1
    assert v[np.argmax(jumps) + 1] == pytest.approx(49.5)


def test_wind_params_order_enforced():
    with pytest.raises(ParameterDomainError):
        WindParams(
            v_ci=TrapezoidPossibility(3, 4, 5, 11),
            v_co=WIND.v_co,
            v_r=WIND.v_r,
            p_r=WIND.p_r,
        )


# -- EV block, transformer, load, balance --------------------------------------


def test_ev_block_scaling():
    per = TrapezoidPossibility(-5, -3, 3, 5)
    assert ev_block_possibility(EVBlock(per, 25)).as_tuple() == (-125, -75, 75, 125)
    assert ev_block_possibility(EVBlock(per, 0)).as_tuple() == (0, 0, 0, 0)
    assert ev_block_possibility(EVBlock(per, 1)) == per


def test_ev_block_count_nonnegative():
    with pytest.raises(ParameterDomainError):
        EVBlock(TrapezoidPossibility(-5, -3, 3, 5), -1)


def test_transformer_power():
    t = TransformerModel(5000.0, 0.0004, 0.013)
    assert transformer_power(t, True, 1.0) == 5000.0
    assert transformer_power(t, True, 0.0) == 4000.0
    assert transformer_power(t, False, 0.37) == 0.0
    assert isinstance(transformer_power(t, True, 0.5), float)


@pytest.mark.parametrize("band", [(0.0, 1.0), (0.9, 0.8), (0.8, 1.1)])
def test_transformer_band_invariant(band):
    with pytest.raises(ParameterDomainError):
        TransformerModel(5000.0, 0.0004, 0.013, *band)


def test_load_states_uniform_grid():
    series = 4500.0 * np.arange(1, 8761) / 8760
    model = load_states_from_hourly(series, 10)
    assert model.states.probs == pytest.approx([0.1] * 10, abs=1e-12)
    # bins span [min, max]; min is 4500/8760, so midpoints sit half a kW above the nominal ones
    assert model.states.values == pytest.approx([225 + 450 * k for k in range(10)], abs=1.0)


def test_load_states_constant_series():
    model = load_states_from_hourly([1234.5] * 50, 10)
    assert model.states.values == (1234.5,)
    assert model.states.probs == (1.0,)


def test_load_states_empty_series():
    with pytest.raises(IngestionError):
        load_states_from_hourly([], 10)


def test_load_states_from_rts_year():
    series = bundled_rts_load()
    model = load_states_from_hourly(series, 10)
    assert sum(model.states.probs) == pytest.approx(1.0, abs=1e-12)
    assert max(model.states.values) <= 4500.0
    width = (series.max() - series.min()) / 10
    assert abs(model.states.mean - series.mean()) <= width


@given(st.lists(st.floats(0.0, 1e4), min_size=1, max_size=300), st.integers(1, 20))
def test_load_states_properties(series, n_states):
    model = load_states_from_hourly(series, n_states)
    series = np.asarray(series)
    assert sum(model.states.probs) == pytest.approx(1.0, abs=1e-9)
    width = (series.max() - series.min()) / n_states
    assert abs(model.states.mean - series.mean()) <= width + 1e-9


def test_adequacy_examples():
    assert adequacy(5000, 0, 0, 0, 4500) == 500
    assert adequacy(0, 0, 0, 0, 0) == 0
    assert adequacy(4000, 39.46, 75, -125, 4275) == pytest.approx(-285.54, abs=1e-9)


@given(st.lists(st.floats(-1e4, 1e4), min_size=5, max_size=5), st.integers(0, 4), st.floats(-1e3, 1e3))
def test_adequacy_linear(args, k, delta):
    bumped = list(args)
    bumped[k] += delta
    sign = -1.0 if k == 4 else 1.0
    assert adequacy(*bumped) - adequacy(*args) == pytest.approx(sign * delta, abs=1e-6)


# -- extrema -------------------------------------------------------------------


def test_solar_extrema_crisp_core():
    crisp = SOLAR.replace_trapezoids(lambda t: TrapezoidPossibility.crisp(t.core_midpoint()))
    point = crisp.point(lambda t: t.a)
    value = solar_power(0.5, point)
    assert solar_power_extrema(0.5, crisp, 1.0) == Interval(value, value)


def test_solar_extrema_zero_irradiance():
    assert solar_power_extrema(0.0, SOLAR, 0.3) == Interval(0.0, 0.0)


def test_solar_extrema_match_grid_at_support():
    got = solar_power_extrema(0.5, SOLAR, 0.0)
    grid = solar_grid_extrema(0.5, SOLAR, 0.0)
    tol = 0.005 * got.width
    assert got.lo == pytest.approx(grid.lo, abs=tol)
    assert got.hi == pytest.approx(grid.hi, abs=tol)


def test_solar_grid_oracle_matches_plain_grid():
    # the factorised oracle against an unfactorised grid on a coarse lattice
    cuts = [alpha_cut(getattr(SOLAR, f), 0.2) for f in SOLAR_FIELDS]
    axes = [np.linspace(c.lo, c.hi, 3) for c in cuts]
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    plain = solar_power(0.7, SolarPoint(*grids, 1000))
    oracle = solar_grid_extrema(0.7, SOLAR, 0.2, points=3)
    assert oracle.lo == pytest.approx(plain.min(), rel=1e-12)
    assert oracle.hi == pytest.approx(plain.max(), rel=1e-12)


def test_wind_extrema_below_cut_in():
    assert wind_power_extrema(2.0, WIND, 0.0) == Interval(0.0, 0.0)


def test_wind_extrema_rated_core():
    # at the top of the rated-speed core every admissible point is rated
    assert wind_power_extrema(11.5, WIND, 1.0) == Interval(145.0, 155.0)


def test_wind_extrema_zero_regime_reachable():
    assert alpha_cut(WIND.v_ci, 0.0) == Interval(3.0, 3.5)
    got = wind_power_extrema(3.25, WIND, 0.0)
    # scan the cut-in speed across its cut with the other parameters at their vertices
    scan = np.linspace(3.0, 3.5, 1000)
    values = [
        wind_power(3.25, WindPoint(scan, v_co, v_r, p_r))
        for v_co, v_r, p_r in itertools.product((45.0, 54.0), (10.0, 12.0), (140.0, 160.0))
    ]
    assert np.min(values) == 0.0
    assert got.lo == 0.0
    assert got.hi == pytest.approx(np.max(values), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1.0), alphas)
def test_solar_extrema_contain_box_points(s, alpha):
    got = solar_power_extrema(s, SOLAR, alpha)
    rng = substream(int(s * 1e6), int(alpha * 1e6))
    pts = random_box_points(SOLAR, SOLAR_FIELDS, alpha, rng, 10_000)
    values = solar_power(s, SolarPoint(*pts, 1000))
    slack = 1e-9 * max(1.0, abs(got.hi))
    assert np.all(values >= got.lo - slack) and np.all(values <= got.hi + slack)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 60.0), alphas)
def test_wind_extrema_contain_box_points(v, alpha):
    got = wind_power_extrema(v, WIND, alpha)
    rng = substream(int(v * 1e4), int(alpha * 1e6))
    pts = random_box_points(WIND, WIND_FIELDS, alpha, rng, 10_000)
    values = wind_power(v, WindPoint(*pts))
    assert np.all(values >= got.lo - 1e-9) and np.all(values <= got.hi + 1e-9)


@settings(max_examples=60)
@given(
    st.floats(0.0, 1.0, allow_subnormal=False), st.floats(0.0, 60.0, allow_subnormal=False), alphas, alphas
)
def test_extrema_shrink_with_alpha(s, v, a1, a2):
    lo, hi = sorted((a1, a2))
    assert solar_power_extrema(s, SOLAR, hi).issubset(solar_power_extrema(s, SOLAR, lo))
    assert wind_power_extrema(v, WIND, hi).issubset(wind_power_extrema(v, WIND, lo))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 60.0), alphas)
def test_wind_extrema_match_full_grid(v, alpha):
    got = wind_power_extrema(v, WIND, alpha)
    grid = wind_grid_extrema(v, WIND, alpha)
    # the grid contains every vertex, so it can only agree or lie inside
    assert grid.lo >= got.lo - 1e-9 and grid.hi <= got.hi + 1e-9
    assert grid.hi == pytest.approx(got.hi, abs=1e-9)
