"""Run configuration and orchestration shared by the CLI and the manifest re-run path."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import ConfigurationError
from .propagation import (
    EvidenceCurves,
    HybridResult,
    ProbabilisticResult,
    UnavailabilityReport,
    default_thresholds,
    evidence_curves,
    hybrid_propagate,
    probabilistic_propagate,
    unavailability,
)
from .scenario import Scenario, scenario_from_dict, scenario_to_dict
from .uncertainty import alpha_levels

MODES = ("hybrid", "probabilistic", "both")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "both"
    samples: int = 1000
    delta_alpha: float = 0.02
    seed: int = 0
    # None shares the hybrid seed, so both engines see the same aleatory sample
    baseline_seed: int | None = None
    # (lo, hi, n) in kW; None derives the grid from the results
    thresholds: tuple | None = None
    n_thresholds: int = 401
    workers: int = 1
    validate_extrema: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.samples < 1:
            raise ConfigurationError("samples must be >= 1")
        alpha_levels(self.delta_alpha)
        if self.seed < 0 or (self.baseline_seed is not None and self.baseline_seed < 0):
            raise ConfigurationError("seeds must be non-negative")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.n_thresholds < 2:
            raise ConfigurationError("need at least two thresholds")
        if self.thresholds is not None:
            lo, hi, n = self.thresholds
            if not (lo < hi and int(n) == n and n >= 2):
                raise ConfigurationError("threshold grid needs lo < hi and n >= 2")
            object.__setattr__(self, "thresholds", (float(lo), float(hi), int(n)))


@dataclass
class RunOutcome:
    scenario: Scenario
    config: RunConfig
    label: str
    hybrid: HybridResult | None
    baseline: ProbabilisticResult | None
    curves: EvidenceCurves
    report: UnavailabilityReport
    wall_time_s: float


def execute(scenario: Scenario, config: RunConfig, label: str | None = None) -> RunOutcome:
    start = time.perf_counter()
    hybrid = baseline = None
    if config.mode in ("hybrid", "both"):
        hybrid = hybrid_propagate(
            scenario,
            config.samples,
            config.delta_alpha,
            config.seed,
            workers=config.workers,
            validate_extrema=config.validate_extrema,
        )
    if config.mode in ("probabilistic", "both"):
        seed = config.seed if config.baseline_seed is None else config.baseline_seed
        baseline = probabilistic_propagate(scenario, config.samples, seed, workers=config.workers)
    if config.thresholds is None:
        thresholds = default_thresholds(hybrid, baseline, n=config.n_thresholds, include=(0.0,))
    else:
        thresholds = np.linspace(*config.thresholds)
    curves = evidence_curves(hybrid, thresholds, baseline)
    label = scenario.name if label is None else label
    report = unavailability(curves, label)
    return RunOutcome(
        scenario, config, label, hybrid, baseline, curves, report, time.perf_counter() - start
    )


def manifest(outcome: RunOutcome) -> dict:
    """Everything needed to reproduce the run's curves bit for bit."""
    return {
        "code_version": __version__,
        "label": outcome.label,
        "seed": outcome.config.seed,
        "m": outcome.config.samples,
        "delta_alpha": outcome.config.delta_alpha,
        "wall_time_s": outcome.wall_time_s,
        "config": asdict(outcome.config),
        "scenario": scenario_to_dict(outcome.scenario),
    }


def from_manifest(doc: dict) -> tuple[Scenario, RunConfig, str]:
    cfg = dict(doc["config"])
    if cfg.get("thresholds") is not None:
        cfg["thresholds"] = tuple(cfg["thresholds"])
    return scenario_from_dict(doc["scenario"]), RunConfig(**cfg), doc.get("label")
