"""Ask/tell optimizer: xNES generations with optional learning-rate adaptation.

The evolution path is tracked in every mode (it is a useful diagnostic even
when the rates are fixed); only adaptive mode feeds it back into the rates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import core, lr_adapt
from .distribution import Population, SearchDistribution, require_unit_det, sample
from .errors import InvalidConfig, InvalidInput


@dataclass(frozen=True)
class GenerationResult:
    """What one tell() produced: the ranked population and both parameter sets."""

    population: Population
    dist_before: SearchDistribution
    dist_after: SearchDistribution
    eta_sigma: float
    eta_b: float
    path_length: float
    gamma: float


class XNES:
    """xNES optimizer with an ask-and-tell interface (minimization).

    Example:

        opt = XNES(mean=np.zeros(10), sigma=1.0, population_size=30, seed=7)
        for _ in range(200):
            xs = opt.ask()
            opt.tell([objective(x) for x in xs])
        best = opt.distribution.mean

    Args:
        mean: initial mean vector (length >= 2).
        sigma: initial step-size, positive.
        b: initial shape matrix with unit determinant (default: identity).
        population_size: number of candidates per generation (default
            4 + floor(3 ln d)).
        adapt_learning_rates: adapt the covariance rates from the evolution
            path; when False they stay fixed at their initial values.
        eta_multiplier: fixed-mode scaling of the default covariance rates.
        lr_config: adaptation hyperparameters (default: standard values for
            the problem dimension). Ignored rates-wise when not adapting.
        eta_m: mean-vector learning rate, fixed (no adaptation).
        seed: int seed or numpy Generator for the sampling stream.
    """

    def __init__(
        self,
        mean: Sequence[float] | np.ndarray,
        sigma: float,
        b: np.ndarray | None = None,
        population_size: int | None = None,
        adapt_learning_rates: bool = True,
        eta_multiplier: float = 1.0,
        lr_config: lr_adapt.LrAdaptConfig | None = None,
        eta_m: float = 1.0,
        seed: int | np.random.Generator | None = None,
    ):
        mean = np.asarray(mean, dtype=float).reshape(-1)
        d = mean.shape[0]
        if d < 2:
            raise InvalidConfig(f"dimension must be at least 2, got {d}")
        if b is None:
            b = np.eye(d)
        self._dist = SearchDistribution(mean, sigma, require_unit_det(b))

        if population_size is None:
            population_size = 4 + int(3 * np.log(d))
        self._weights = core.shaping_weights(population_size)

        if eta_multiplier <= 0:
            raise InvalidConfig(f"eta_multiplier must be positive, got {eta_multiplier}")
        self._adapt = bool(adapt_learning_rates)
        self._lr_config = (
            lr_config
            if lr_config is not None
            else lr_adapt.LrAdaptConfig.for_dimension(d, population_size=population_size)
        )
        if self._adapt:
            initial_rate = None  # adaptation starts from the default rate
        else:
            initial_rate = eta_multiplier * core.default_learning_rate(d)
        self._lr_state = lr_adapt.LrAdaptState.initial(d, initial_rate, initial_rate)
        self._eta_m = float(eta_m)

        self._rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self._pending: Population | None = None
        self._generation = 0

    @property
    def dim(self) -> int:
        return self._dist.dim

    @property
    def population_size(self) -> int:
        return self._weights.lam

    @property
    def distribution(self) -> SearchDistribution:
        return self._dist

    @property
    def generation(self) -> int:
        return self._generation

    @property
    def evaluations(self) -> int:
        return self._generation * self.population_size

    @property
    def learning_rates(self) -> tuple[float, float]:
        """Current (eta_sigma, eta_b), the rates the next update will use."""
        return self._lr_state.eta_sigma, self._lr_state.eta_b

    @property
    def adapt_state(self) -> lr_adapt.LrAdaptState:
        return self._lr_state

    def ask(self) -> np.ndarray:
        """Sample one generation of candidates; returns a (lambda, d) array."""
        self._pending = sample(self._dist, self.population_size, self._rng)
        return self._pending.x

    def tell(self, values: Sequence[float] | np.ndarray) -> GenerationResult:
        """Rank the pending candidates and advance one generation.

        ``values`` are objective values in ask() order, lower is better.
        Raises NumericalFailure if the update diverges (the optimizer is then
        no longer usable) and InvalidInput on a length mismatch.
        """
        if self._pending is None:
            raise InvalidInput("tell() called without a pending ask()")
        evaluated = self._pending.evaluated(np.asarray(values, dtype=float))
        self._pending = None

        grad = core.estimate_gradient(self._weights, evaluated.sorted_z)
        before = self._dist
        after = core.update(
            before, grad, self._eta_m, self._lr_state.eta_sigma, self._lr_state.eta_b
        )

        state = lr_adapt.path_update(
            self._lr_state,
            before.sigma,
            before.b,
            after.sigma,
            after.b,
            self._weights.sum_w_sq,
            beta=self._lr_config.beta,
        )
        state = replace(state, gamma=lr_adapt.gamma_update(state.gamma, self._lr_config.beta))
        if self._adapt:
            state = lr_adapt.lr_update(state, self._lr_config)

        self._dist = after
        self._lr_state = state
        self._generation += 1
        return GenerationResult(
            population=evaluated,
            dist_before=before,
            dist_after=after,
            eta_sigma=state.eta_sigma,
            eta_b=state.eta_b,
            path_length=state.path_length,
            gamma=state.gamma,
        )

    def step(self, objective: Callable[[np.ndarray], float]) -> GenerationResult:
        """Convenience ask/evaluate/tell round using a vector-to-scalar callable."""
        xs = self.ask()
        return self.tell([float(objective(x)) for x in xs])
