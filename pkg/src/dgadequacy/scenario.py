"""Scenario definition, JSON (de)serialisation and the modified IEEE-34 cases.

Scenario files are JSON objects with explicit units in the key names. A
trapezoid is written as ``[a, b, c, d]`` (support lower, core lower, core
upper, support upper). Minimal example::

    {
      "name": "example",
      "transformer": {"capacity_kw": 5000, "failure_rate_per_yr": 0.0004,
                      "repair_rate_per_yr": 0.013, "fluctuation_band": [0.8, 1.0]},
      "solar_fleet": {"count": 5, "unit": {"i_mpp_a": [4.36, 4.56, 4.86, 5.06], ...,
                                           "n_cells": 1000}},
      "wind_fleet": {"count": 5, "unit": {"v_ci_mps": [3.0, 3.2, 3.4, 3.5], ...}},
      "ev_block": {"count": 25, "per_vehicle_kw": [-5, -3, 3, 5]},
      "irradiance": {"distribution": "beta", "alpha": 0.2114, "beta": 0.6454},
      "wind_speed": {"distribution": "weibull", "params": [18.2304, 10.4655]},
      "weibull_param_order": "scale_shape",
      "load": {"n_states": 10, "states_kw": [...], "probabilities": [...]}
    }

``load`` may instead name an hourly series: ``{"hourly_file": "load.csv",
"n_states": 10}``, resolved relative to the scenario file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .components import (
    EVBlock,
    LoadModel,
    SolarParams,
    TransformerModel,
    WindParams,
    load_states_from_hourly,
)
from .errors import (
    AdequacyError,
    IngestionError,
    ParameterDomainError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .loadcurve import bundled_rts_load, data_path, ingest_hourly_load
from .uncertainty import (
    Beta,
    DiscreteStates,
    TrapezoidPossibility,
    Uniform,
    Weibull,
    fit_beta_moments,
)

WEIBULL_ORDERS = ("scale_shape", "shape_scale")

SOLAR_KEYS = {
    "i_mpp": "i_mpp_a",
    "v_mpp": "v_mpp_v",
    "v_oc": "v_oc_v",
    "i_sc": "i_sc_a",
    "t_a": "t_a_c",
    "n_ot": "n_ot_c",
    "k_c": "k_c_a_per_c",
    "k_v": "k_v_v_per_c",
}
WIND_KEYS = {"v_ci": "v_ci_mps", "v_co": "v_co_mps", "v_r": "v_r_mps", "p_r": "p_r_kw"}


@dataclass(frozen=True)
class SolarFleet:
    unit_params: SolarParams
    count: int


@dataclass(frozen=True)
class WindFleet:
    unit_params: WindParams
    count: int


@dataclass(frozen=True)
class Scenario:
    name: str
    transformer: TransformerModel
    solar_fleet: SolarFleet
    wind_fleet: WindFleet
    ev_block: EVBlock
    irradiance: Beta | Uniform
    wind_speed: Weibull | Uniform
    load: LoadModel
    weibull_param_order: str = "scale_shape"
    topology: dict | None = field(default=None, hash=False)

    def map_trapezoids(self, fn) -> "Scenario":
        """Copy with ``fn`` applied to every epistemic trapezoid."""
        return replace(
            self,
            solar_fleet=replace(
                self.solar_fleet,
                unit_params=self.solar_fleet.unit_params.replace_trapezoids(fn),
            ),
            wind_fleet=replace(
                self.wind_fleet,
                unit_params=self.wind_fleet.unit_params.replace_trapezoids(fn),
            ),
            ev_block=replace(self.ev_block, per_vehicle=fn(self.ev_block.per_vehicle)),
        )


def collapse_epistemic(scenario: Scenario) -> Scenario:
    """Replace each trapezoid by a crisp value at its core midpoint."""
    return scenario.map_trapezoids(lambda t: TrapezoidPossibility.crisp(t.core_midpoint()))


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


class _Violations:
    def __init__(self):
        self.items = []

    def add(self, path, message):
        self.items.append(f"{path}: {message}")

    def guard(self, path, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (AdequacyError, ValueError, TypeError) as exc:
            self.add(path, exc)
            return None


def _section(node, key, path, out, required=True):
    value = node.get(key) if isinstance(node, dict) else None
    if value is None:
        if required:
            out.add(f"{path}{key}", f"{key} required")
        return None
    return value


def _object(node, key, path, out):
    value = _section(node, key, path, out)
    if value is not None and not isinstance(value, dict):
        out.add(f"{path}{key}", "expected an object")
        return None
    return value


def _number(node, key, path, out, integer=False):
    value = _section(node, key, path, out)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        out.add(f"{path}{key}", f"expected a number, got {value!r}")
        return None
    if integer and int(value) != value:
        out.add(f"{path}{key}", f"expected an integer, got {value!r}")
        return None
    return int(value) if integer else float(value)


def _trapezoid(node, key, path, out):
    value = _section(node, key, path, out)
    if value is None:
        return None
    if not (isinstance(value, list) and len(value) == 4):
        out.add(f"{path}{key}", "expected [a, b, c, d]")
        return None
    return out.guard(f"{path}{key}", TrapezoidPossibility, *value)


def _distribution(node, path, out, weibull_order):
    if not isinstance(node, dict):
        out.add(path, "expected an object")
        return None
    kind = node.get("distribution")
    p = path + "."
    if kind == "beta":
        if "mean" in node:
            moments = out.guard(path, fit_beta_moments, node.get("mean"), node.get("variance"))
            return out.guard(path, Beta, *moments) if moments else None
        a, b = _number(node, "alpha", p, out), _number(node, "beta", p, out)
        return out.guard(path, Beta, a, b) if None not in (a, b) else None
    if kind == "uniform":
        lo, hi = _number(node, "lo", p, out), _number(node, "hi", p, out)
        return out.guard(path, Uniform, lo, hi) if None not in (lo, hi) else None
    if kind == "weibull":
        params = node.get("params")
        if not (isinstance(params, list) and len(params) == 2):
            out.add(f"{p}params", "expected two Weibull parameters")
            return None
        scale, shape = params if weibull_order == "scale_shape" else params[::-1]
        return out.guard(path, Weibull, scale, shape)
    out.add(f"{p}distribution", f"unknown distribution {kind!r}")
    return None


def _load(node, path, out, base_dir):
    n_states = _number(node, "n_states", path + ".", out, integer=True) if "n_states" in node else 10
    if n_states is None:
        return None
    if "hourly_file" in node:
        file = Path(base_dir) / node["hourly_file"]
        try:
            series = ingest_hourly_load(file)
        except IngestionError as exc:
            out.add(f"{path}.hourly_file", exc)
            return None
        return out.guard(path, load_states_from_hourly, series, n_states)
    values, probs = node.get("states_kw"), node.get("probabilities")
    if values is None or probs is None:
        out.add(path, "needs either hourly_file or states_kw with probabilities")
        return None
    states = out.guard(path, DiscreteStates, values, probs)
    return out.guard(path, LoadModel, states, n_states) if states else None


def scenario_from_dict(doc: dict, base_dir=".") -> Scenario:
    """Validate a decoded scenario document; every violation is reported at once."""
    out = _Violations()
    if not isinstance(doc, dict):
        raise ScenarioValidationError(["<root>: expected a JSON object"])

    name = doc.get("name", "scenario")
    order = doc.get("weibull_param_order", "scale_shape")
    if order not in WEIBULL_ORDERS:
        out.add("weibull_param_order", f"must be one of {WEIBULL_ORDERS}")
        order = "scale_shape"

    transformer = None
    node = _object(doc, "transformer", "", out)
    if node is not None:
        p = "transformer."
        cap = _number(node, "capacity_kw", p, out)
        lam = _number(node, "failure_rate_per_yr", p, out)
        mu = _number(node, "repair_rate_per_yr", p, out)
        band = node.get("fluctuation_band", [0.8, 1.0])
        if not (isinstance(band, list) and len(band) == 2):
            out.add(f"{p}fluctuation_band", "expected [lo, hi]")
        elif None not in (cap, lam, mu):
            transformer = out.guard("transformer", TransformerModel, cap, lam, mu, *band)

    solar = None
    node = _object(doc, "solar_fleet", "", out)
    if node is not None:
        count = _number(node, "count", "solar_fleet.", out, integer=True)
        unit = _object(node, "unit", "solar_fleet.", out)
        if unit is not None:
            p = "solar_fleet.unit."
            traps = {k: _trapezoid(unit, key, p, out) for k, key in SOLAR_KEYS.items()}
            n_cells = _number(unit, "n_cells", p, out, integer=True)
            if None not in traps.values() and n_cells is not None:
                params = out.guard("solar_fleet.unit", SolarParams, **traps, n_cells=n_cells)
                if params is not None and count is not None:
                    if count < 0:
                        out.add("solar_fleet.count", "must be >= 0")
                    else:
                        solar = SolarFleet(params, count)

    wind = None
    node = _object(doc, "wind_fleet", "", out)
    if node is not None:
        count = _number(node, "count", "wind_fleet.", out, integer=True)
        unit = _object(node, "unit", "wind_fleet.", out)
        if unit is not None:
            traps = {k: _trapezoid(unit, key, "wind_fleet.unit.", out) for k, key in WIND_KEYS.items()}
            if None not in traps.values():
                params = out.guard("wind_fleet.unit", WindParams, **traps)
                if params is not None and count is not None:
                    if count < 0:
                        out.add("wind_fleet.count", "must be >= 0")
                    else:
                        wind = WindFleet(params, count)

    ev = None
    node = _object(doc, "ev_block", "", out)
    if node is not None:
        count = _number(node, "count", "ev_block.", out, integer=True)
        per_vehicle = _trapezoid(node, "per_vehicle_kw", "ev_block.", out)
        if count is not None and per_vehicle is not None:
            ev = out.guard("ev_block", EVBlock, per_vehicle, count)

    irradiance = None
    node = _object(doc, "irradiance", "", out)
    if node is not None:
        irradiance = _distribution(node, "irradiance", out, order)
        if isinstance(irradiance, Weibull) or (
            isinstance(irradiance, Uniform) and not 0 <= irradiance.lo < irradiance.hi <= 1
        ):
            out.add("irradiance", "per-unit irradiance must be supported on [0, 1]")
            irradiance = None

    wind_speed = None
    node = _object(doc, "wind_speed", "", out)
    if node is not None:
        wind_speed = _distribution(node, "wind_speed", out, order)
        if isinstance(wind_speed, Beta) or (isinstance(wind_speed, Uniform) and wind_speed.lo < 0):
            out.add("wind_speed", "wind speed must be a Weibull or a non-negative uniform law")
            wind_speed = None

    load = None
    node = _object(doc, "load", "", out)
    if node is not None:
        load = _load(node, "load", out, base_dir)

    topology = doc.get("topology")
    if topology is not None and not isinstance(topology, dict):
        out.add("topology", "expected an object")

    if out.items:
        raise ScenarioValidationError(out.items)
    return Scenario(
        name=str(name),
        transformer=transformer,
        solar_fleet=solar,
        wind_fleet=wind,
        ev_block=ev,
        irradiance=irradiance,
        wind_speed=wind_speed,
        load=load,
        weibull_param_order=order,
        topology=topology,
    )


def parse_scenario(path) -> Scenario:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return scenario_from_dict(doc, base_dir=path.parent)


# --------------------------------------------------------------------------
# writing
# --------------------------------------------------------------------------


def _distribution_to_dict(model, order):
    if isinstance(model, Beta):
        return {"distribution": "beta", "alpha": model.alpha, "beta": model.beta}
    if isinstance(model, Uniform):
        return {"distribution": "uniform", "lo": model.lo, "hi": model.hi}
    if isinstance(model, Weibull):
        params = [model.scale, model.shape]
        return {
            "distribution": "weibull",
            "params": params if order == "scale_shape" else params[::-1],
        }
    raise ParameterDomainError(f"cannot serialise {type(model).__name__}")


def scenario_to_dict(s: Scenario) -> dict:
    solar = s.solar_fleet.unit_params
    wind = s.wind_fleet.unit_params
    doc = {
        "name": s.name,
        "transformer": {
            "capacity_kw": s.transformer.capacity,
            "failure_rate_per_yr": s.transformer.failure_rate,
            "repair_rate_per_yr": s.transformer.repair_rate,
            "fluctuation_band": [s.transformer.fluct_lo, s.transformer.fluct_hi],
        },
        "solar_fleet": {
            "count": s.solar_fleet.count,
            "unit": {
                **{key: list(getattr(solar, k).as_tuple()) for k, key in SOLAR_KEYS.items()},
                "n_cells": solar.n_cells,
            },
        },
        "wind_fleet": {
            "count": s.wind_fleet.count,
            "unit": {key: list(getattr(wind, k).as_tuple()) for k, key in WIND_KEYS.items()},
        },
        "ev_block": {
            "count": s.ev_block.count,
            "per_vehicle_kw": list(s.ev_block.per_vehicle.as_tuple()),
        },
        "irradiance": _distribution_to_dict(s.irradiance, s.weibull_param_order),
        "wind_speed": _distribution_to_dict(s.wind_speed, s.weibull_param_order),
        "weibull_param_order": s.weibull_param_order,
        "load": {
            "n_states": s.load.n_states,
            "states_kw": list(s.load.states.values),
            "probabilities": list(s.load.states.probs),
        },
    }
    if s.topology is not None:
        doc["topology"] = s.topology
    return doc


def write_scenario(s: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# modified IEEE-34 feeder cases
# --------------------------------------------------------------------------

# (wind turbines, solar arrays, electric vehicles) per renewable penetration level
PENETRATION_COUNTS = {"p15": (3, 3, 15), "p25": (5, 5, 25), "p35": (7, 7, 35)}

# support lower, core lower, core upper, support upper
SOLAR_UNIT = {
    "i_mpp": (4.36, 4.56, 4.86, 5.06),
    "v_mpp": (15.32, 16.32, 18.02, 18.32),
    "v_oc": (19.98, 20.98, 21.98, 22.98),
    "i_sc": (4.82, 5.12, 5.42, 5.62),
    "t_a": (27.0, 29.0, 30.5, 32.0),
    "n_ot": (39.0, 41.0, 44.0, 46.0),
    "k_c": (0.00102, 0.00112, 0.00132, 0.00152),
    "k_v": (0.0124, 0.0134, 0.0144, 0.0164),
}
WIND_UNIT = {
    "v_ci": (3.0, 3.2, 3.4, 3.5),
    "v_co": (45.0, 48.0, 51.0, 54.0),
    "v_r": (10.0, 11.0, 11.5, 12.0),
    "p_r": (140.0, 145.0, 155.0, 160.0),
}
EV_PER_VEHICLE_KW = (-5.0, -3.0, 3.0, 5.0)
MODULES_PER_ARRAY = 1000
IRRADIANCE_BETA = (0.2114, 0.6454)
WIND_SPEED_WEIBULL = (18.2304, 10.4655)


def normalise_level(level) -> str:
    key = str(level).lower().lstrip("p").rstrip("%")
    key = f"p{key}"
    if key not in PENETRATION_COUNTS:
        raise ParameterDomainError(f"penetration level must be one of 15, 25, 35; got {level!r}")
    return key


def build_penetration_case(level, load_series=None, weibull_param_order="scale_shape") -> Scenario:
    """Modified IEEE-34 feeder at 15, 25 or 35 percent renewable penetration.

    ``load_series`` defaults to the bundled RTS-shaped year with a 4500 kW peak.
    The Weibull pair is read according to ``weibull_param_order``.
    """
    key = normalise_level(level)
    n_wind, n_solar, n_ev = PENETRATION_COUNTS[key]
    if load_series is None:
        load_series = bundled_rts_load()
    if weibull_param_order not in WEIBULL_ORDERS:
        raise ParameterDomainError(f"weibull_param_order must be one of {WEIBULL_ORDERS}")
    scale, shape = (
        WIND_SPEED_WEIBULL if weibull_param_order == "scale_shape" else WIND_SPEED_WEIBULL[::-1]
    )
    solar = SolarParams(
        **{k: TrapezoidPossibility(*v) for k, v in SOLAR_UNIT.items()},
        n_cells=MODULES_PER_ARRAY,
    )
    wind = WindParams(**{k: TrapezoidPossibility(*v) for k, v in WIND_UNIT.items()})
    return Scenario(
        name=f"ieee34_{key[1:]}pct",
        transformer=TransformerModel(5000.0, 0.0004, 0.013, 0.8, 1.0),
        solar_fleet=SolarFleet(solar, n_solar),
        wind_fleet=WindFleet(wind, n_wind),
        ev_block=EVBlock(TrapezoidPossibility(*EV_PER_VEHICLE_KW), n_ev),
        irradiance=Beta(*IRRADIANCE_BETA),
        wind_speed=Weibull(scale, shape),
        load=load_states_from_hourly(load_series, 10),
        weibull_param_order=weibull_param_order,
        topology={"feeder": "IEEE 34-node test feeder (modified)", "placements": {}},
    )


def bundled_scenario_path(name: str) -> Path:
    return data_path(f"{name}.json")


def resolve_scenario(spec) -> Scenario:
    """Load a scenario from a file path or a bundled name such as ``ieee34_25pct``."""
    path = Path(spec)
    if not path.exists() and not path.suffix:
        bundled = bundled_scenario_path(str(spec))
        if bundled.exists():
            path = bundled
    return parse_scenario(path)
