"""``assess`` command line entry point.

Exit codes: 0 success, 2 invalid scenario or configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    ConfigurationError,
    IngestionError,
    ParameterDomainError,
    PropagationError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .loadcurve import ingest_hourly_load
from .results import write_results
from .run import MODES, RunConfig, execute, from_manifest, manifest
from .scenario import WEIBULL_ORDERS, build_penetration_case, resolve_scenario

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 2, 3
DEFAULT_SEED = 12345


def _threshold_grid(text):
    if text == "auto":
        return None
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO:HI:N or 'auto'") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="assess",
        description="Adequacy assessment of a distribution system with uncertain DG.",
    )
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", help="scenario JSON file or bundled name (e.g. ieee34_25pct)")
    src.add_argument("--penetration", choices=("15", "25", "35"), help="built-in IEEE-34 case")
    src.add_argument("--manifest", help="re-run from a previous run.json")
    ap.add_argument("--load", help="hourly load file for --penetration (kW, one per line)")
    ap.add_argument("--weibull-order", choices=WEIBULL_ORDERS, default="scale_shape")
    ap.add_argument("--mode", choices=MODES, default="both")
    ap.add_argument("--samples", type=int, default=1000, help="Monte Carlo iterations m")
    ap.add_argument("--alpha-step", type=float, default=0.02, help="alpha-cut step")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument(
        "--baseline-seed", type=int, default=None, help="seed for the probabilistic run (default: --seed)"
    )
    ap.add_argument("--thresholds", type=_threshold_grid, default=None, help="LO:HI:N in kW, or auto")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--validate-extrema", action="store_true")
    ap.add_argument("--out", default="results", help="output directory")
    return ap


def _fmt(value):
    return "-" if value is None else f"{value:.4f}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        label = None
        if args.manifest:
            with open(args.manifest, encoding="utf-8") as fh:
                scenario, config, label = from_manifest(json.load(fh))
        else:
            if args.penetration:
                series = ingest_hourly_load(args.load) if args.load else None
                scenario = build_penetration_case(args.penetration, series, args.weibull_order)
                label = f"{args.penetration}%"
            else:
                if args.load:
                    raise ConfigurationError("--load applies to --penetration only")
                scenario = resolve_scenario(args.scenario)
            config = RunConfig(
                mode=args.mode,
                samples=args.samples,
                delta_alpha=args.alpha_step,
                seed=args.seed,
                baseline_seed=args.baseline_seed,
                thresholds=args.thresholds,
                workers=args.workers,
                validate_extrema=args.validate_extrema,
            )
        outcome = execute(scenario, config, label)
        paths = write_results(outcome.curves, [outcome.report], args.out, manifest(outcome))
    except (
        ScenarioValidationError,
        ScenarioParseError,
        ConfigurationError,
        ParameterDomainError,
        IngestionError,
        PropagationError,
    ) as exc:
        print(f"assess: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"assess: {exc}", file=sys.stderr)
        return EXIT_IO

    r = outcome.report
    print(f"{'scenario':<16}{'Pl':>10}{'Bel':>10}{'Prob':>10}")
    print(f"{r.penetration_label:<16}{_fmt(r.pl):>10}{_fmt(r.bel):>10}{_fmt(r.prob):>10}")
    print(f"results written to {paths['curves'].parent}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
