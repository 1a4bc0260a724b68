"""Random valid inputs shared by the property suites and the acceptance run."""

import numpy as np
from hypothesis import strategies as st

from dgadequacy.components import EVBlock, LoadModel, SolarParams, TransformerModel, WindParams
from dgadequacy.scenario import SOLAR_UNIT, WIND_UNIT, Scenario, SolarFleet, WindFleet
from dgadequacy.uncertainty import Beta, DiscreteStates, TrapezoidPossibility, Uniform, Weibull


@st.composite
def trapezoids(draw, lo=-100.0, hi=100.0):
    xs = sorted(
        draw(st.floats(lo, hi, allow_nan=False, allow_infinity=False)) for _ in range(4)
    )
    return TrapezoidPossibility(*xs)


alphas = st.floats(0.0, 1.0, allow_nan=False)


def random_trapezoid(rng, center, rel_spread, crisp_prob=0.0):
    """Trapezoid around ``center`` whose support is within ``rel_spread`` of it."""
    if rng.random() < crisp_prob:
        return TrapezoidPossibility.crisp(center)
    offsets = np.sort(rng.uniform(-rel_spread, rel_spread, 4)) * abs(center)
    return TrapezoidPossibility(*(center + offsets))


def random_scenario(rng, name="random"):
    """A scenario inside the model's valid ranges, loosely around the IEEE-34 case."""
    crisp = rng.uniform(0.0, 0.3)
    solar = {}
    for field, (a, b, c, d) in SOLAR_UNIT.items():
        if field == "v_oc":
            continue
        center = 0.5 * (b + c) * rng.uniform(0.8, 1.2)
        solar[field] = random_trapezoid(rng, center, rng.uniform(0.0, 0.15), crisp)
    # open-circuit voltage sits strictly above the whole MPP voltage support
    v_oc_center = solar["v_mpp"].d * rng.uniform(1.1, 1.4)
    solar["v_oc"] = random_trapezoid(rng, v_oc_center, rng.uniform(0.0, 0.05), crisp)
    solar_params = SolarParams(**solar, n_cells=int(rng.integers(1, 2000)))

    v_ci = random_trapezoid(rng, rng.uniform(2.0, 4.0), rng.uniform(0.0, 0.2), crisp)
    v_r = random_trapezoid(rng, rng.uniform(8.0, 14.0), rng.uniform(0.0, 0.2), crisp)
    v_co = random_trapezoid(rng, rng.uniform(25.0, 55.0), rng.uniform(0.0, 0.2), crisp)
    p_r = random_trapezoid(rng, rng.uniform(50.0, 300.0), rng.uniform(0.0, 0.3), crisp)
    wind_params = WindParams(v_ci=v_ci, v_co=v_co, v_r=v_r, p_r=p_r)

    ev_center = rng.uniform(-2.0, 2.0)
    ev = random_trapezoid(rng, ev_center, 0.0) if rng.random() < crisp else TrapezoidPossibility(
        *np.sort(rng.uniform(-6.0, 6.0, 4))
    )

    irradiance = (
        Beta(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0))
        if rng.random() < 0.7
        else Uniform(*np.sort(rng.uniform(0.0, 1.0, 2)))
    )
    wind_speed = (
        Weibull(rng.uniform(3.0, 25.0), rng.uniform(1.0, 12.0))
        if rng.random() < 0.7
        else Uniform(*np.sort(rng.uniform(0.0, 30.0, 2)))
    )
    n_states = int(rng.integers(1, 11))
    probs = rng.dirichlet(np.ones(n_states))
    probs[-1] = 1.0 - probs[:-1].sum()
    load = LoadModel(DiscreteStates(tuple(rng.uniform(500.0, 6000.0, n_states)), tuple(probs)), n_states)
    return Scenario(
        name=name,
        transformer=TransformerModel(
            rng.uniform(1000.0, 8000.0),
            rng.uniform(1e-4, 1.0),
            rng.uniform(1e-3, 10.0),
            *np.sort(rng.uniform(0.5, 1.0, 2)),
        ),
        solar_fleet=SolarFleet(solar_params, int(rng.integers(0, 10))),
        wind_fleet=WindFleet(wind_params, int(rng.integers(0, 10))),
        ev_block=EVBlock(ev, int(rng.integers(0, 50))),
        irradiance=irradiance,
        wind_speed=wind_speed,
        load=load,
    )
