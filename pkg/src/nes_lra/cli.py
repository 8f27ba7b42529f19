"""Command-line interface: `nes-lra run` for one experiment, `nes-lra sweep`
for a grid. Exit codes: 0 ok, 2 invalid configuration, 3 I/O error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmarks import BENCHMARK_NAMES, benchmark_spec
from .errors import InvalidConfig, NesLraError
from .harness import (
    ExperimentConfig,
    SWEEP_PRESETS,
    append_aggregate,
    preset_configs,
    run_experiment,
    sweep,
    trace_filename,
    write_trace,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nes-lra",
        description="xNES with evolution-path learning-rate adaptation: "
        "benchmark runner and sweep tool.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one benchmark/population configuration")
    _add_common(run)
    run.add_argument("--function", choices=BENCHMARK_NAMES, help="benchmark name")
    run.add_argument("--lambda", dest="lam", type=int, help="population size")
    run.add_argument(
        "--lr-mode", choices=("adaptive", "fixed"), default=None, help="learning-rate mode"
    )
    run.add_argument(
        "--multiplier", type=float, default=None,
        help="default-rate multiplier for --lr-mode fixed (default 1)",
    )
    run.add_argument(
        "--trace-every", type=int, default=None,
        help="generation stride between trace rows (default 1)",
    )

    sw = sub.add_parser("sweep", help="run a lambda x lr-mode grid, resumably")
    _add_common(sw)
    sw.add_argument("--preset", choices=tuple(SWEEP_PRESETS), help="named grid")
    sw.add_argument("--function", choices=BENCHMARK_NAMES, help="benchmark for a custom grid")
    sw.add_argument(
        "--lambdas", default=None,
        help="comma-separated population sizes for a custom grid (may be empty)",
    )
    sw.add_argument(
        "--modes", default=None,
        help="comma-separated modes for a custom grid, e.g. adaptive,fixedx1,fixedx8",
    )
    return parser


def _add_common(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--config", default=None, help="JSON file with defaults for these flags")
    cmd.add_argument("--dim", type=int, default=None, help="problem dimension (default 10)")
    cmd.add_argument("--trials", type=int, default=None, help="trials per configuration (default 20)")
    cmd.add_argument("--seed", type=int, default=None, help="base seed; trial i uses seed+i (default 42)")
    cmd.add_argument("--target", type=float, default=None, help="target objective value (default 1e-8)")
    cmd.add_argument("--max-evals", type=int, default=None, help="evaluation budget per trial (default 500000)")
    cmd.add_argument("--workers", type=int, default=None, help="worker processes for trials (default 1)")
    cmd.add_argument("--alpha", type=float, default=None, help="path-length threshold (default 1.3)")
    cmd.add_argument("--beta", type=float, default=None, help="cumulation factor (default 0.2)")
    cmd.add_argument("--eta-min", type=float, default=None, help="learning-rate floor (default: standard rate)")
    cmd.add_argument("--eta-max", type=float, default=None, help="learning-rate ceiling (default 1)")
    cmd.add_argument("--out", default=None, help="output directory (default results/)")


def _merge_config_file(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the --config JSON file; explicit flags win."""
    if not args.config:
        return args
    path = Path(args.config)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _IoError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidConfig(f"config file {path} must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if attr == "lambda":
            attr = "lam"
        if not hasattr(args, attr):
            raise InvalidConfig(f"config file {path}: unknown key {key!r}")
        if getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


class _IoError(NesLraError):
    pass


def _experiment_config(args, lam: int, lr_mode: str, multiplier: float,
                       trace_every: int) -> ExperimentConfig:
    spec = benchmark_spec(args.function, args.dim if args.dim is not None else 10)
    return ExperimentConfig(
        benchmark=spec,
        lam=lam,
        lr_mode=lr_mode,
        multiplier=multiplier,
        target=args.target if args.target is not None else 1e-8,
        max_evals=args.max_evals if args.max_evals is not None else 500_000,
        trials=args.trials if args.trials is not None else 20,
        base_seed=args.seed if args.seed is not None else 42,
        trace_every=trace_every,
        alpha=args.alpha,
        beta=args.beta,
        eta_min=args.eta_min,
        eta_max=args.eta_max,
    )


def _parse_mode(token: str) -> tuple[str, float]:
    token = token.strip()
    if token == "adaptive":
        return "adaptive", 1.0
    if token == "fixed":
        return "fixed", 1.0
    if token.startswith("fixedx"):
        try:
            return "fixed", float(token[len("fixedx"):])
        except ValueError:
            pass
    raise InvalidConfig(f"unknown mode {token!r}, expected adaptive, fixed or fixedx<m>")


def _cmd_run(args) -> int:
    if not args.function:
        raise InvalidConfig("run requires --function (flag or config file)")
    if args.lam is None:
        raise InvalidConfig("run requires --lambda (flag or config file)")
    config = _experiment_config(
        args,
        lam=args.lam,
        lr_mode=args.lr_mode if args.lr_mode is not None else "adaptive",
        multiplier=args.multiplier if args.multiplier is not None else 1.0,
        trace_every=args.trace_every if args.trace_every is not None else 1,
    )
    out = Path(args.out if args.out is not None else "results")
    _ensure_dir(out)

    result, records = run_experiment(
        config, workers=args.workers if args.workers is not None else 1
    )
    try:
        for record in records:
            write_trace(out / trace_filename(config, record.seed), record)
        aggregate_path = out / "aggregate.csv"
        aggregate_path.unlink(missing_ok=True)  # run rewrites its single row
        append_aggregate(aggregate_path, result)
    except OSError as exc:
        raise _IoError(f"cannot write results under {out}: {exc}") from exc

    score = "n/a" if result.score is None else f"{result.score:.1f}"
    print(
        f"{config.benchmark.name} d={config.benchmark.dim} lambda={config.lam} "
        f"{config.mode_label}: success_rate={result.success_rate:.2f} score={score}"
    )
    print(f"wrote {len(records)} trace file(s) and aggregate.csv to {out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    trace_every = 0  # sweeps keep only aggregates
    if args.preset:
        configs = preset_configs(
            args.preset,
            dim=args.dim if args.dim is not None else 10,
            trials=args.trials if args.trials is not None else 20,
            base_seed=args.seed if args.seed is not None else 42,
            target=args.target if args.target is not None else 1e-8,
            max_evals=args.max_evals if args.max_evals is not None else 500_000,
            alpha=args.alpha,
            beta=args.beta,
            eta_min=args.eta_min,
            eta_max=args.eta_max,
        )
    else:
        if not args.function or args.lambdas is None:
            raise InvalidConfig("sweep requires --preset, or --function with --lambdas")
        lambdas = [int(tok) for tok in args.lambdas.split(",") if tok.strip()]
        modes = [
            _parse_mode(tok)
            for tok in (args.modes or "adaptive").split(",")
            if tok.strip()
        ]
        configs = [
            _experiment_config(args, lam=lam, lr_mode=mode, multiplier=mult,
                               trace_every=trace_every)
            for lam in lambdas
            for mode, mult in modes
        ]

    out = Path(args.out if args.out is not None else "results")
    _ensure_dir(out)
    try:
        results = sweep(
            configs,
            out,
            workers=args.workers if args.workers is not None else 1,
            log=lambda msg: print(msg, flush=True),
        )
    except OSError as exc:
        raise _IoError(f"cannot write results under {out}: {exc}") from exc
    print(f"sweep complete: {len(results)} configuration(s) in {out / 'aggregate.csv'}")
    return EXIT_OK


def _ensure_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _IoError(f"cannot create output directory {path}: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config_file(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except _IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NesLraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
