"""xNES with evolution-path based learning-rate adaptation.

Public surface: the XNES ask/tell optimizer, the building blocks it composes
(search distribution, gradient estimation, rate adaptation), benchmark
functions with their standard initial parameters, and the experiment harness.
"""

from .benchmarks import (
    BENCHMARK_NAMES,
    BenchmarkSpec,
    RandomObjective,
    benchmark_spec,
    bohachevsky,
    ellipsoid,
    evaluate,
    rastrigin,
    sphere,
)
from .core import (
    NaturalGradient,
    ShapingWeights,
    default_learning_rate,
    estimate_gradient,
    shaping_weights,
    update,
)
from .distribution import Population, SamplePair, SearchDistribution, sample
from .errors import (
    InvalidConfig,
    InvalidInput,
    InvalidMatrix,
    NesLraError,
    NumericalFailure,
    SingularMatrix,
)
from .harness import (
    AggregateResult,
    ExperimentConfig,
    TraceRow,
    TrialRecord,
    aggregate_records,
    preset_configs,
    run_experiment,
    run_trial,
    sweep,
)
from .lr_adapt import (
    LrAdaptConfig,
    LrAdaptState,
    expected_kl_norm,
    gamma_update,
    lr_update,
    path_update,
    stable_eta_max,
)
from .lr_adapt import step as lr_adapt_step
from .optimizer import GenerationResult, XNES
from .symmat import sym_eigen, sym_exp, sym_inv_sqrt, symmetrize

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "BENCHMARK_NAMES",
    "BenchmarkSpec",
    "ExperimentConfig",
    "GenerationResult",
    "InvalidConfig",
    "InvalidInput",
    "InvalidMatrix",
    "LrAdaptConfig",
    "LrAdaptState",
    "NaturalGradient",
    "NesLraError",
    "NumericalFailure",
    "Population",
    "RandomObjective",
    "SamplePair",
    "SearchDistribution",
    "ShapingWeights",
    "SingularMatrix",
    "TraceRow",
    "TrialRecord",
    "XNES",
    "aggregate_records",
    "benchmark_spec",
    "bohachevsky",
    "default_learning_rate",
    "ellipsoid",
    "estimate_gradient",
    "evaluate",
    "expected_kl_norm",
    "gamma_update",
    "lr_adapt_step",
    "lr_update",
    "path_update",
    "preset_configs",
    "rastrigin",
    "run_experiment",
    "run_trial",
    "sample",
    "shaping_weights",
    "sphere",
    "stable_eta_max",
    "sweep",
    "sym_eigen",
    "sym_exp",
    "sym_inv_sqrt",
    "symmetrize",
    "update",
]
