"""The Gaussian search distribution N(m, sigma^2 * B @ B.T) and seeded sampling.

The distribution is parameterized by a mean vector, a scalar step-size sigma,
and a shape matrix B with det(B) = 1; the full covariance sigma^2 * B @ B.T is
derived on demand. Sampling draws standard-normal vectors z and maps them
through x = m + sigma * B @ z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import InvalidConfig, InvalidInput, NumericalFailure
from .symmat import symmetrize

# |det(B) - 1| above this triggers renormalization (and rejects construction)
DET_TOLERANCE = 1e-6


class SamplePair(NamedTuple):
    """One candidate: the standard-normal draw z, the solution x, its value."""

    z: np.ndarray
    x: np.ndarray
    value: float | None


@dataclass
class SearchDistribution:
    """Parameter triple (mean, sigma, b) of the search distribution.

    Treated as an immutable value: updates produce new instances.
    """

    mean: np.ndarray
    sigma: float
    b: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.array(self.mean, dtype=float).reshape(-1)
        self.b = np.array(self.b, dtype=float)
        self.sigma = float(self.sigma)
        d = self.mean.shape[0]
        if d < 1:
            raise InvalidConfig("mean must have at least one component")
        if self.b.shape != (d, d):
            raise InvalidConfig(f"b must be {d}x{d}, got {self.b.shape}")
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise InvalidConfig(f"sigma must be positive and finite, got {self.sigma}")
        if not (np.all(np.isfinite(self.mean)) and np.all(np.isfinite(self.b))):
            raise InvalidConfig("distribution parameters must be finite")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def covariance(self) -> np.ndarray:
        """Full covariance sigma^2 * B @ B.T (symmetric positive definite)."""
        return self.sigma**2 * self.shape_covariance()

    def shape_covariance(self) -> np.ndarray:
        """The sigma-free part B @ B.T."""
        return symmetrize(self.b @ self.b.T)

    def renormalized(self) -> "SearchDistribution":
        """Fold det(B) drift into sigma, leaving the covariance unchanged."""
        return with_unit_det(self.mean, self.sigma, self.b)


def with_unit_det(mean: np.ndarray, sigma: float, b: np.ndarray) -> SearchDistribution:
    """Construct a SearchDistribution, folding any det(B) drift into sigma.

    Rescaling b by det^(-1/d) and sigma by det^(1/d) leaves the covariance
    sigma^2 * B @ B.T unchanged, so this is safe even when b is so
    ill-conditioned that the determinant itself is only known to a few
    digits. Rescales only when |det(B) - 1| exceeds DET_TOLERANCE. det(B)
    stays positive along any update trajectory that starts at det = 1, so a
    non-positive determinant signals breakdown.
    """
    b = np.asarray(b, dtype=float)
    det = float(np.linalg.det(b))
    if not np.isfinite(det) or det <= 0:
        raise NumericalFailure(f"det(B) degenerated to {det}")
    if abs(det - 1.0) > DET_TOLERANCE:
        scale = det ** (1.0 / b.shape[0])
        sigma, b = sigma * scale, b / scale
    return SearchDistribution(mean, sigma, b)


def require_unit_det(b: np.ndarray) -> np.ndarray:
    """Validate a user-supplied shape matrix: det must be 1 within tolerance."""
    b = np.asarray(b, dtype=float)
    det = float(np.linalg.det(b))
    if abs(det - 1.0) > DET_TOLERANCE:
        raise InvalidConfig(f"det(b) must be 1 within {DET_TOLERANCE}, got {det}")
    return b


@dataclass
class Population:
    """A batch of samples from one generation, kept as (count, d) arrays.

    ``values`` is None until the candidates have been evaluated; ``order``
    holds the ascending-value sort (stable, so ties keep sample order) once
    values are attached.
    """

    z: np.ndarray
    x: np.ndarray
    values: np.ndarray | None = None
    order: np.ndarray | None = field(default=None)

    def __len__(self) -> int:
        return self.z.shape[0]

    def __iter__(self) -> Iterator[SamplePair]:
        for i in range(len(self)):
            v = None if self.values is None else float(self.values[i])
            yield SamplePair(self.z[i], self.x[i], v)

    def evaluated(self, values: np.ndarray) -> "Population":
        """Attach objective values and compute the minimization sort order."""
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape[0] != len(self):
            raise InvalidInput(
                f"expected {len(self)} objective values, got {values.shape[0]}"
            )
        if np.any(np.isnan(values)):
            raise NumericalFailure("objective returned NaN")
        order = np.argsort(values, kind="stable")
        return Population(self.z, self.x, values, order)

    @property
    def sorted_z(self) -> np.ndarray:
        """z vectors sorted best (lowest value) first."""
        if self.order is None:
            raise InvalidInput("population has not been evaluated yet")
        return self.z[self.order]

    @property
    def best_value(self) -> float:
        if self.values is None:
            raise InvalidInput("population has not been evaluated yet")
        return float(self.values[self.order[0]])


def sample(
    dist: SearchDistribution, count: int, rng: np.random.Generator
) -> Population:
    """Draw ``count`` candidates from the distribution using ``rng``.

    Each row satisfies x = m + sigma * B @ z with an independent standard
    normal z; the rng stream advances deterministically.
    """
    if count < 2:
        raise InvalidConfig(f"population size must be at least 2, got {count}")
    z = rng.standard_normal((count, dist.dim))
    x = dist.mean + dist.sigma * (z @ dist.b.T)
    return Population(z=z, x=x)
