"""Command-line interface.

Subcommands: estimate, band, test-tr, test-eq, simulate, truth-surface,
experiment, catalog.  Exit codes: 0 ok, 1 usage error, 2 data error.
Every output file embeds the resolved configuration (including the seed and
the RNG algorithm id), so re-running a command with the same arguments
reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import models
from .core import (
    RNG_ALGORITHM,
    FrequencyGrid,
    InferenceConfig,
    QuantileGrid,
    SpectralSurface,
    as_series,
    read_flat_config,
    rule_of_thumb_block,
    write_csv_with_config,
)
from .experiments import ExperimentSpec, run_experiment
from .inference import eq_test, tr_test
from .spectrum import integrated_spectrum, monte_carlo_truth
from .subsample import pointwise_band, uniform_band


class DataError(Exception):
    """Problem with input data or runtime configuration (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit with code 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_series(path: str) -> np.ndarray:
    try:
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read series from {path}: {exc}") from exc
    column = "x" if "x" in frame.columns else frame.columns[0]
    try:
        return as_series(frame[column].to_numpy(dtype=float))
    except (TypeError, ValueError) as exc:
        raise DataError(f"invalid series in {path}: {exc}") from exc


def _parse_pair(text: str) -> tuple:
    try:
        a, b = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise DataError(f"cannot parse quantile pair {text!r}") from exc
    return (a, b)


def _config(args, n: int) -> InferenceConfig:
    b = args.b if args.b is not None else rule_of_thumb_block(n)
    return InferenceConfig(
        b=b,
        d=args.d,
        alpha=args.alpha,
        fpc=args.fpc,
        weight=args.weight,
        quantile_grid=QuantileGrid.regular(args.qstep),
        seed=args.seed,
    )


def _write_json(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def cmd_estimate(args) -> int:
    x = _read_series(args.input)
    fgrid = FrequencyGrid(args.d)
    qgrid = QuantileGrid.regular(args.qstep)
    surface = integrated_spectrum(x, fgrid, qgrid)
    config = {
        "command": "estimate",
        "n": int(x.size),
        "d": args.d,
        "qstep": args.qstep,
        "rng": RNG_ALGORITHM,
    }
    surface.to_csv(args.output, config)
    return 0


def cmd_band(args) -> int:
    x = _read_series(args.input)
    cfg = _config(args, x.size)
    cfg.require_block(x.size)
    if args.kind == "pointwise":
        tau1, tau2 = _parse_pair(args.pair)
        band = pointwise_band(x, cfg, tau1, tau2, args.part)
    else:
        band = uniform_band(x, cfg, None, args.part)
    band.to_csv(args.output)
    return 0


def cmd_test(args, which: str) -> int:
    x = _read_series(args.input)
    cfg = _config(args, x.size)
    cfg.require_block(x.size)
    report = tr_test(x, cfg) if which == "tr" else eq_test(x, cfg)
    _write_json(report.to_dict(), args.output)
    return 0


def cmd_simulate(args) -> int:
    spec = models.as_model_spec(args.model)
    for rep in range(args.reps):
        stream = np.random.SeedSequence(args.seed, spawn_key=(rep,))
        series = models.generate(spec, args.n, stream)
        if args.reps == 1:
            path = Path(args.output)
        else:
            base = Path(args.output)
            path = base.with_name(f"{base.stem}-{rep:03d}{base.suffix or '.csv'}")
        config = {
            "command": "simulate",
            "model": args.model,
            "n": args.n,
            "seed": args.seed,
            "rep": rep,
            "rng": RNG_ALGORITHM,
        }
        write_csv_with_config(pd.DataFrame({"x": series}), path, config)
    return 0


def cmd_truth_surface(args) -> int:
    fgrid = FrequencyGrid(args.d if args.d is not None else args.n)
    qgrid = QuantileGrid.regular(args.qstep)
    surface = monte_carlo_truth(
        args.model, args.n, args.reps, fgrid, qgrid, seed=args.seed, workers=args.threads
    )
    config = {
        "command": "truth-surface",
        "model": args.model,
        "n": args.n,
        "reps": args.reps,
        "d": fgrid.d,
        "qstep": args.qstep,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
    }
    surface.to_csv(args.output, config)
    return 0


def cmd_experiment(args) -> int:
    cfg = InferenceConfig(
        b=args.b if args.b is not None else 32,
        d=args.d,
        alpha=args.alpha,
        fpc=args.fpc,
        weight=args.weight,
        quantile_grid=QuantileGrid.regular(args.qstep),
        seed=args.seed,
    )
    spec = ExperimentSpec(
        kind=args.kind,
        models=tuple(args.model),
        ns=tuple(args.n),
        reps=args.reps,
        config=cfg,
        block=args.b,
        pair=_parse_pair(args.pair),
        part=args.part,
    )
    truth_surfaces = {}
    for entry in args.truth or []:
        try:
            name, n_text, path = entry.split(":", 2)
            truth_surfaces[(name, int(n_text))] = SpectralSurface.from_csv(path)
        except (OSError, ValueError) as exc:
            raise DataError(f"cannot load truth surface {entry!r}: {exc}") from exc
    result = run_experiment(spec, workers=args.threads, truth_surfaces=truth_surfaces or None)
    prefix = Path(args.output)
    rows_path = prefix.with_suffix(".rows.csv")
    summary_path = prefix.with_suffix(".summary.json")
    write_csv_with_config(result.rows, rows_path, spec.to_dict())
    _write_json({"spec": spec.to_dict(), "summary": result.summary}, str(summary_path))
    if args.plot_data:
        plot_path = prefix.with_suffix(".plot.csv")
        frame = pd.DataFrame(result.summary)
        write_csv_with_config(frame, plot_path, spec.to_dict())
    return 0


def cmd_catalog(args) -> int:
    entries = [
        {"name": name, "family": spec.family, "param": spec.param}
        for name, spec in models.model_catalog()
    ]
    _write_json({"models": entries}, args.output)
    return 0


def _add_common(parser, *, needs_input: bool):
    if needs_input:
        parser.add_argument("--input", required=True, help="input series CSV (column 'x' or first column)")
    parser.add_argument("--config", default=None,
                        help="flat key/value settings file; explicit flags take precedence")
    parser.add_argument("--d", type=int, default=32, help="frequency grid size (default 32)")
    parser.add_argument("--alpha", type=float, default=0.05, help="level (default 0.05)")
    parser.add_argument("--weight", default="s4", choices=["s1", "s2", "s3", "s4", "s5"])
    parser.add_argument("--fpc", action=argparse.BooleanOptionalAction, default=True,
                        help="finite-population correction (default on)")
    parser.add_argument("--b", type=int, default=None, help="block length (default: rule of thumb)")
    parser.add_argument("--qstep", type=int, default=16, help="quantile grid denominator (levels k/qstep)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="copspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="integrated copula spectrum of a series")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--config", default=None,
                   help="flat key/value settings file; explicit flags take precedence")
    p.add_argument("--d", type=int, default=32)
    p.add_argument("--qstep", type=int, default=8)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("band", help="subsampling confidence band")
    _add_common(p, needs_input=True)
    p.add_argument("--output", required=True)
    p.add_argument("--kind", choices=["pointwise", "uniform"], default="uniform")
    p.add_argument("--pair", default="0.5,0.5", help="tau1,tau2 for pointwise bands")
    p.add_argument("--part", choices=["re", "im"], default="re")
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("test-tr", help="time-reversibility test")
    _add_common(p, needs_input=True)
    p.add_argument("--output", default=None, help="report JSON (default: stdout)")
    p.set_defaults(func=lambda a: cmd_test(a, "tr"))

    p = sub.add_parser("test-eq", help="tail-symmetry test")
    _add_common(p, needs_input=True)
    p.add_argument("--output", default=None, help="report JSON (default: stdout)")
    p.set_defaults(func=lambda a: cmd_test(a, "eq"))

    p = sub.add_parser("simulate", help="draw series from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="series CSV (suffixed when reps > 1)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("truth-surface", help="simulated truth surface of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, default=2048, help="series length / fine Fourier grid (default 2048)")
    p.add_argument("--reps", type=int, default=5000)
    p.add_argument("--d", type=int, default=None, help="output frequency grid size (default: n)")
    p.add_argument("--qstep", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_truth_surface)

    p = sub.add_parser("experiment", help="Monte Carlo coverage or size/power study")
    _add_common(p, needs_input=False)
    p.add_argument("--kind", required=True,
                   choices=["coverage-pointwise", "coverage-uniform", "size-power-tr", "size-power-eq"])
    p.add_argument("--model", nargs="+", required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--pair", default="0.5,0.5")
    p.add_argument("--part", choices=["re", "im"], default="re")
    p.add_argument("--truth", nargs="*", default=None,
                   help="MODEL:N:PATH truth surfaces for non-M0 coverage")
    p.add_argument("--plot-data", action="store_true", help="also write a tidy summary CSV")
    p.add_argument("--output", required=True, help="output path prefix")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("catalog", help="list the model catalog as JSON")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_catalog)

    return parser


def _apply_config_file(args, argv) -> None:
    """Fill settings from --config; flags given on the command line win."""
    if not getattr(args, "config", None):
        return
    values = read_flat_config(args.config)
    explicit = set()
    for token in argv:
        if token.startswith("--"):
            name = token[2:].split("=", 1)[0]
            explicit.add("fpc" if name in ("fpc", "no-fpc") else name.replace("-", "_"))
    for key, value in values.items():
        if key not in explicit and hasattr(args, key):
            setattr(args, key, value)


def main(argv=None) -> int:
    parser = build_parser()
    tokens = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(tokens)
    try:
        _apply_config_file(args, tokens)
        return args.func(args)
    except DataError as exc:
        print(f"copspec: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"copspec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
