"""Experiment runner: seeded trials, stopping rules, the evaluations/success-rate
metric, grid sweeps, and CSV serialization.

A trial runs the optimizer until the best objective value seen reaches the
target, the evaluation budget is exhausted, or the update diverges
(divergence counts as an unsuccessful trial, never as an error). Trials are
independent: trial i uses seed base_seed + i for everything random, so
experiments are reproducible and can run on worker processes without
changing any result.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .benchmarks import BenchmarkSpec, benchmark_spec
from .errors import InvalidConfig, NumericalFailure, SingularMatrix
from .lr_adapt import LrAdaptConfig
from .optimizer import XNES

AGGREGATE_HEADER = (
    "function,dim,lambda,lr_mode,multiplier,trials,"
    "success_rate,mean_evals_success,score,base_seed"
)
TRACE_HEADER = "evals,f_best,eta_sigma,eta_b,l_theta,gamma"

# standard population grids for the comparison sweeps, keyed by preset name
SWEEP_PRESETS = {
    "fig4-sphere": ("sphere", (10, 20, 30, 40, 50)),
    "fig4-ellipsoid": ("ellipsoid", (10, 20, 30, 40, 50)),
    "fig4-rastrigin": ("rastrigin", (200, 250, 300, 350, 400)),
    "fig4-bohachevsky": ("bohachevsky", (30, 40, 50, 60, 70)),
}
PRESET_MULTIPLIERS = (1, 2, 4, 6, 8, 10)


class TraceRow(NamedTuple):
    evals: int
    f_best: float
    eta_sigma: float
    eta_b: float
    l_theta: float
    gamma: float


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a benchmark, a population size, and a learning-rate mode.

    ``lr_mode`` is "adaptive" or "fixed"; ``multiplier`` scales the default
    covariance rates in fixed mode. ``trace_every`` is the generation stride
    for trace rows (0 disables trace collection, which saves memory in
    aggregate-only sweeps).
    """

    benchmark: BenchmarkSpec
    lam: int
    lr_mode: str = "adaptive"
    multiplier: float = 1.0
    target: float = 1e-8
    max_evals: int = 500_000
    trials: int = 20
    base_seed: int = 42
    trace_every: int = 1
    alpha: float | None = None
    beta: float | None = None
    eta_min: float | None = None
    eta_max: float | None = None

    def __post_init__(self):
        if self.lr_mode not in ("adaptive", "fixed"):
            raise InvalidConfig(f"lr_mode must be 'adaptive' or 'fixed', got {self.lr_mode!r}")
        if self.lam < 2:
            raise InvalidConfig(f"population size must be at least 2, got {self.lam}")
        if self.multiplier <= 0:
            raise InvalidConfig(f"multiplier must be positive, got {self.multiplier}")
        if self.max_evals < 1 or self.trials < 1:
            raise InvalidConfig("max_evals and trials must be positive")
        if self.trace_every < 0:
            raise InvalidConfig(f"trace_every must be >= 0, got {self.trace_every}")

    @property
    def mode_label(self) -> str:
        if self.lr_mode == "adaptive":
            return "adaptive"
        return f"fixedx{self.multiplier:g}"

    def lr_config(self) -> LrAdaptConfig:
        return LrAdaptConfig.for_dimension(
            self.benchmark.dim,
            alpha=1.3 if self.alpha is None else self.alpha,
            beta=0.2 if self.beta is None else self.beta,
            eta_min=self.eta_min,
            eta_max=self.eta_max,
            population_size=self.lam,
        )


@dataclass
class TrialRecord:
    """Outcome of one trial plus its (possibly strided) trace."""

    seed: int
    success: bool
    evals_used: int
    f_best_final: float
    status: str  # "success" | "budget" | "numerical_failure"
    trace: list[TraceRow] = field(default_factory=list)


@dataclass(frozen=True)
class AggregateResult:
    """The evaluations/success-rate metric over one experiment's trials.

    ``score`` is mean evaluations of successful trials divided by the success
    rate (lower is better); both are None when no trial succeeded.
    """

    function: str
    dim: int
    lam: int
    lr_mode: str
    multiplier: float
    trials: int
    success_rate: float
    mean_evals_success: float | None
    score: float | None
    base_seed: int


def run_trial(config: ExperimentConfig, seed: int) -> TrialRecord:
    """Run one seeded trial to target, budget exhaustion, or divergence.

    Evaluation accounting is exact: evals_used is completed generations times
    lambda, and f_best only reflects those same evaluations. A generation
    whose update diverges contributes neither.
    """
    opt_seed, obj_seed = np.random.SeedSequence(seed).spawn(2)
    spec = config.benchmark
    objective = spec.make_objective(np.random.default_rng(obj_seed))
    batch_eval = objective.batch if hasattr(objective, "batch") else objective

    opt = XNES(
        mean=spec.init_mean,
        sigma=spec.init_sigma,
        b=spec.init_b,
        population_size=config.lam,
        adapt_learning_rates=(config.lr_mode == "adaptive"),
        eta_multiplier=config.multiplier,
        lr_config=config.lr_config(),
        seed=np.random.default_rng(opt_seed),
    )

    f_best = math.inf
    trace: list[TraceRow] = []
    status = "budget"
    while opt.evaluations + config.lam <= config.max_evals:
        xs = opt.ask()
        values = np.asarray(batch_eval(xs), dtype=float)
        try:
            report = opt.tell(values)
        except (NumericalFailure, SingularMatrix):
            # divergence under an aggressive learning rate: an unsuccessful
            # trial, never an aborted experiment
            status = "numerical_failure"
            break
        f_best = min(f_best, report.population.best_value)
        done = f_best <= config.target
        if config.trace_every and (
            opt.generation % config.trace_every == 0
            or done
            or opt.evaluations + config.lam > config.max_evals
        ):
            trace.append(
                TraceRow(
                    evals=opt.evaluations,
                    f_best=f_best,
                    eta_sigma=report.eta_sigma,
                    eta_b=report.eta_b,
                    l_theta=report.path_length,
                    gamma=report.gamma,
                )
            )
        if done:
            status = "success"
            break

    return TrialRecord(
        seed=seed,
        success=(status == "success"),
        evals_used=opt.evaluations,
        f_best_final=f_best,
        status=status,
        trace=trace,
    )


def _trial_task(args: tuple[ExperimentConfig, int]) -> TrialRecord:
    return run_trial(*args)


def aggregate_records(
    config: ExperimentConfig, records: Sequence[TrialRecord]
) -> AggregateResult:
    """Fold trial records into the evaluations/success-rate metric."""
    successes = [r for r in records if r.success]
    rate = len(successes) / len(records)
    mean_evals = (
        sum(r.evals_used for r in successes) / len(successes) if successes else None
    )
    score = mean_evals / rate if mean_evals is not None else None
    return AggregateResult(
        function=config.benchmark.name,
        dim=config.benchmark.dim,
        lam=config.lam,
        lr_mode=config.lr_mode,
        multiplier=config.multiplier,
        trials=config.trials,
        success_rate=rate,
        mean_evals_success=mean_evals,
        score=score,
        base_seed=config.base_seed,
    )


def run_experiment(
    config: ExperimentConfig, workers: int = 1
) -> tuple[AggregateResult, list[TrialRecord]]:
    """Run all trials (seeds base_seed .. base_seed + trials - 1) and aggregate.

    ``workers`` > 1 distributes trials over processes; results are identical
    to a serial run because each trial is sealed behind its own seed.
    """
    tasks = [(config, config.base_seed + i) for i in range(config.trials)]
    if workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trial_task, tasks))
    else:
        records = [run_trial(*t) for t in tasks]
    return aggregate_records(config, records), records


def sweep(
    configs: Sequence[ExperimentConfig],
    out_dir: str | Path,
    workers: int = 1,
    log=None,
) -> list[AggregateResult]:
    """Run a grid of experiments, appending rows to out_dir/aggregate.csv.

    Rows are written as each experiment finishes, and experiments whose
    config key is already present in the file are skipped, so an interrupted
    sweep can be resumed by re-running it.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "aggregate.csv"
    existing = {_result_key(r): r for r in read_aggregate(path)} if path.exists() else {}

    results = []
    for config in configs:
        key = _config_key(config)
        if key in existing:
            results.append(existing[key])
            if log:
                log(f"skip (already done): {_describe(config)}")
            continue
        if log:
            log(f"run: {_describe(config)}")
        result, _ = run_experiment(config, workers=workers)
        append_aggregate(path, result)
        results.append(result)
    return results


def preset_configs(preset: str, **overrides) -> list[ExperimentConfig]:
    """Expand a named sweep preset into its lambda x mode grid.

    Modes are adaptive plus fixed multipliers 1, 2, 4, 6, 8 and 10; keyword
    overrides (trials, base_seed, max_evals, ...) apply to every config.
    """
    if preset not in SWEEP_PRESETS:
        raise InvalidConfig(
            f"unknown preset {preset!r}, expected one of {tuple(SWEEP_PRESETS)}"
        )
    function, lambdas = SWEEP_PRESETS[preset]
    dim = overrides.pop("dim", 10)
    trace_every = overrides.pop("trace_every", 0)
    spec = benchmark_spec(function, dim)
    configs = []
    for lam in lambdas:
        base = ExperimentConfig(
            benchmark=spec, lam=lam, trace_every=trace_every, **overrides
        )
        configs.append(base)
        for mult in PRESET_MULTIPLIERS:
            configs.append(replace(base, lr_mode="fixed", multiplier=float(mult)))
    return configs


# ---------------------------------------------------------------------------
# CSV serialization. Floats are written with repr() for exact round-trips.


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def aggregate_row(result: AggregateResult) -> str:
    multiplier = result.multiplier if result.lr_mode == "fixed" else None
    fields = (
        result.function,
        result.dim,
        result.lam,
        result.lr_mode,
        multiplier,
        result.trials,
        float(result.success_rate),
        result.mean_evals_success,
        result.score,
        result.base_seed,
    )
    return ",".join(_fmt(f) for f in fields)


def append_aggregate(path: str | Path, result: AggregateResult) -> None:
    path = Path(path)
    new_file = not path.exists()
    with open(path, "a", encoding="utf-8", newline="") as fh:
        if new_file:
            fh.write(AGGREGATE_HEADER + "\n")
        fh.write(aggregate_row(result) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def read_aggregate(path: str | Path) -> list[AggregateResult]:
    results = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            results.append(
                AggregateResult(
                    function=row["function"],
                    dim=int(row["dim"]),
                    lam=int(row["lambda"]),
                    lr_mode=row["lr_mode"],
                    multiplier=float(row["multiplier"]) if row["multiplier"] else 1.0,
                    trials=int(row["trials"]),
                    success_rate=float(row["success_rate"]),
                    mean_evals_success=(
                        float(row["mean_evals_success"]) if row["mean_evals_success"] else None
                    ),
                    score=float(row["score"]) if row["score"] else None,
                    base_seed=int(row["base_seed"]),
                )
            )
    return results


def trace_filename(config: ExperimentConfig, seed: int) -> str:
    return f"trace_{config.benchmark.name}_{config.lam}_{config.mode_label}_{seed}.csv"


def write_trace(path: str | Path, record: TrialRecord) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        for row in record.trace:
            fh.write(
                ",".join(
                    (str(row.evals), repr(row.f_best), repr(row.eta_sigma),
                     repr(row.eta_b), repr(row.l_theta), repr(row.gamma))
                )
                + "\n"
            )


def _config_key(config: ExperimentConfig):
    multiplier = config.multiplier if config.lr_mode == "fixed" else None
    return (
        config.benchmark.name,
        config.benchmark.dim,
        config.lam,
        config.lr_mode,
        multiplier,
        config.trials,
        config.base_seed,
    )


def _result_key(result: AggregateResult):
    multiplier = result.multiplier if result.lr_mode == "fixed" else None
    return (
        result.function,
        result.dim,
        result.lam,
        result.lr_mode,
        multiplier,
        result.trials,
        result.base_seed,
    )


def _describe(config: ExperimentConfig) -> str:
    return (
        f"{config.benchmark.name} d={config.benchmark.dim} lambda={config.lam} "
        f"{config.mode_label} trials={config.trials}"
    )
