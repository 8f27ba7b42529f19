"""Benchmark objective functions and their standard initial parameters.

All deterministic functions accept arrays of shape (d,) or (n, d) and reduce
over the last axis, so whole populations can be evaluated in one call. The
"random" objective returns a fresh uniform draw per evaluation regardless of
the input; it induces uniformly random rankings and serves as the noise null
model for path diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig, InvalidInput


def sphere(x: np.ndarray) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def ellipsoid(x: np.ndarray) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    if d < 2:
        raise InvalidConfig("ellipsoid requires dimension >= 2")
    coeff = 1000.0 ** (np.arange(d) / (d - 1))
    return np.sum((coeff * x) ** 2, axis=-1)


def rastrigin(x: np.ndarray) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    return 10.0 * d + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


def bohachevsky(x: np.ndarray) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    a, b = x[..., :-1], x[..., 1:]
    return np.sum(
        a * a
        + 2.0 * b * b
        - 0.3 * np.cos(3.0 * np.pi * a)
        - 0.4 * np.cos(4.0 * np.pi * b)
        + 0.7,
        axis=-1,
    )


class RandomObjective:
    """Pure-noise objective: every evaluation is an independent uniform draw."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng

    def __call__(self, x: np.ndarray) -> float:
        return float(self._rng.random())

    def batch(self, xs: np.ndarray) -> np.ndarray:
        return self._rng.random(np.asarray(xs).shape[0])


_FUNCTIONS = {
    "sphere": sphere,
    "ellipsoid": ellipsoid,
    "rastrigin": rastrigin,
    "bohachevsky": bohachevsky,
}

# initial (mean component, sigma) per function, identity shape matrix
_PRESETS = {
    "sphere": (3.0, 2.0),
    "ellipsoid": (3.0, 2.0),
    "rastrigin": (3.0, 2.0),
    "bohachevsky": (8.0, 7.0),
    "random": (3.0, 2.0),
}

BENCHMARK_NAMES = tuple(_PRESETS)


@dataclass(frozen=True)
class BenchmarkSpec:
    """A benchmark function plus the initial search-distribution parameters."""

    name: str
    dim: int
    init_mean: np.ndarray
    init_sigma: float
    init_b: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.name not in _PRESETS:
            raise InvalidConfig(
                f"unknown benchmark {self.name!r}, expected one of {BENCHMARK_NAMES}"
            )
        if self.dim < 2:
            raise InvalidConfig(f"benchmarks require dimension >= 2, got {self.dim}")
        if self.init_b is None:
            object.__setattr__(self, "init_b", np.eye(self.dim))

    @property
    def deterministic(self) -> bool:
        return self.name != "random"

    def make_objective(self, rng: np.random.Generator | None = None):
        """Return the callable for this benchmark; the random objective needs
        its own generator."""
        if self.name == "random":
            if rng is None:
                raise InvalidConfig("the random objective requires an rng")
            return RandomObjective(rng)
        return _FUNCTIONS[self.name]


def benchmark_spec(name: str, dim: int = 10) -> BenchmarkSpec:
    """Standard initial parameters: mean [3,...,3] and sigma 2 everywhere
    except bohachevsky (mean [8,...,8], sigma 7)."""
    if name not in _PRESETS:
        raise InvalidConfig(
            f"unknown benchmark {name!r}, expected one of {BENCHMARK_NAMES}"
        )
    mean_value, sigma = _PRESETS[name]
    return BenchmarkSpec(
        name=name,
        dim=dim,
        init_mean=np.full(dim, mean_value),
        init_sigma=sigma,
    )


def evaluate(
    spec: BenchmarkSpec, x: np.ndarray, rng: np.random.Generator | None = None
) -> float:
    """Evaluate one candidate under the spec, checking the dimension."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise InvalidInput(f"expected a vector of length {spec.dim}, got shape {x.shape}")
    if spec.name == "random":
        if rng is None:
            raise InvalidConfig("the random objective requires an rng")
        return float(rng.random())
    return float(_FUNCTIONS[spec.name](x))
