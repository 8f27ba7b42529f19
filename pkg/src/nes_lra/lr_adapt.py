"""Learning-rate adaptation driven by an evolution path in covariance-parameter space.

After every generation the covariance movement (the difference of consecutive
covariance matrices) is whitened by the old covariance, normalized by its
expected magnitude under a pure-noise objective, and accumulated into an
evolution path. The squared path length measures how consistently the
covariance has been moving: well above its noise baseline means the gradient
estimate is trustworthy and the covariance learning rates are raised, near
the baseline means the estimate is noise-dominated and they are lowered.
Rates are clipped to [eta_min, eta_max], with eta_min the standard xNES value
and eta_max at most 1, lowered by default for small populations (see
stable_eta_max).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import default_learning_rate, shaping_weights
from .errors import InvalidConfig, SingularMatrix
from .symmat import sym_eigen, symmetrize

# per-generation spectral kick eta * sqrt(d * sum w^2) allowed at the ceiling
STABILITY_KICK = 0.25


def stable_eta_max(dim: int, sum_w_sq: float) -> float:
    """Largest covariance learning rate the default configuration allows.

    The estimated shape gradient has eigenvalue dispersion proportional to
    sqrt(d * sum(w^2)), so the exponential update multiplies covariance axes
    by roughly exp(+-eta * sqrt(d * sum w^2)) per generation even without any
    signal; pure-noise runs diverge once that kick passes ~0.5. The ceiling
    holds the kick at half that, which both keeps maximum-rate phases
    recoverable and keeps full-speed convergence slow enough that multimodal
    basins are not committed to before they are sampled. Small populations
    get a lower ceiling; large populations keep the full range.
    """
    return min(1.0, STABILITY_KICK / math.sqrt(dim * sum_w_sq))


@dataclass(frozen=True)
class LrAdaptConfig:
    """Hyperparameters of the adaptation mechanism.

    ``beta`` is the cumulation factor of the evolution path and the noise
    baseline; the per-channel gains ``beta_sigma``/``beta_b`` default to the
    same value, as do the thresholds ``alpha_sigma``/``alpha_b``, but can be
    set independently.
    """

    eta_sigma_min: float
    eta_b_min: float
    eta_sigma_max: float = 1.0
    eta_b_max: float = 1.0
    alpha_sigma: float = 1.3
    alpha_b: float = 1.3
    beta: float = 0.2
    beta_sigma: float | None = None
    beta_b: float | None = None

    def __post_init__(self) -> None:
        if self.alpha_sigma <= 0 or self.alpha_b <= 0:
            raise InvalidConfig("alpha must be positive")
        if not 0.0 < self.beta < 1.0:
            raise InvalidConfig(f"beta must be in (0, 1), got {self.beta}")
        for name, gain in (("beta_sigma", self.beta_sigma), ("beta_b", self.beta_b)):
            if gain is not None and not 0.0 < gain < 1.0:
                raise InvalidConfig(f"{name} must be in (0, 1), got {gain}")
        for name, lo, hi in (
            ("eta_sigma", self.eta_sigma_min, self.eta_sigma_max),
            ("eta_b", self.eta_b_min, self.eta_b_max),
        ):
            if not 0.0 < lo <= hi <= 1.0:
                raise InvalidConfig(
                    f"need 0 < {name}_min <= {name}_max <= 1, got [{lo}, {hi}]"
                )

    @property
    def gain_sigma(self) -> float:
        return self.beta if self.beta_sigma is None else self.beta_sigma

    @property
    def gain_b(self) -> float:
        return self.beta if self.beta_b is None else self.beta_b

    @classmethod
    def for_dimension(
        cls,
        dim: int,
        alpha: float = 1.3,
        beta: float = 0.2,
        eta_min: float | None = None,
        eta_max: float | None = None,
        population_size: int | None = None,
    ) -> "LrAdaptConfig":
        """Defaults for a given dimension: alpha = 1.3, beta = 0.2,
        eta_min = the standard xNES rate, eta_max = 1.

        When ``population_size`` is given and ``eta_max`` is not, the ceiling
        is additionally bounded by stable_eta_max for that population, so a
        small population cannot be driven into unrecoverable rate territory.
        Pass ``eta_max`` explicitly (or construct the config directly) to opt
        out of that bound.
        """
        if dim < 2:
            raise InvalidConfig(
                f"learning-rate adaptation requires dimension >= 2, got {dim}"
            )
        if eta_min is None:
            eta_min = default_learning_rate(dim)
        if eta_max is None:
            eta_max = 1.0
            if population_size is not None:
                sum_w_sq = shaping_weights(population_size).sum_w_sq
                eta_max = max(eta_min, stable_eta_max(dim, sum_w_sq))
        return cls(
            eta_sigma_min=eta_min,
            eta_b_min=eta_min,
            eta_sigma_max=eta_max,
            eta_b_max=eta_max,
            alpha_sigma=alpha,
            alpha_b=alpha,
            beta=beta,
        )


@dataclass(frozen=True)
class LrAdaptState:
    """Evolution path, its noise baseline, and the current learning rates.

    ``path`` is a symmetric d x d matrix accumulating whitened covariance
    movements; ``gamma`` is the expected squared path length under a random
    objective (0 at start, converging to 1); ``path_length`` is the last
    computed squared length trace(path^2)/2.
    """

    path: np.ndarray
    gamma: float
    eta_sigma: float
    eta_b: float
    path_length: float = 0.0

    @classmethod
    def initial(
        cls, dim: int, eta_sigma: float | None = None, eta_b: float | None = None
    ) -> "LrAdaptState":
        """Zero path, gamma = 0, rates at the standard xNES value unless given."""
        if dim < 2:
            raise InvalidConfig(f"path tracking requires dimension >= 2, got {dim}")
        default = default_learning_rate(dim)
        return cls(
            path=np.zeros((dim, dim)),
            gamma=0.0,
            eta_sigma=default if eta_sigma is None else eta_sigma,
            eta_b=default if eta_b is None else eta_b,
        )


def expected_kl_norm(
    dim: int, eta_sigma: float, eta_b: float, sum_w_sq: float
) -> float:
    """Expected squared Fisher-metric movement of the covariance parameters
    under a random objective, for one generation at the given rates.

    Recomputed every generation because it depends on the current rates.
    ``sum_w_sq`` is sum(w_i^2), the reciprocal effective selection mass.
    """
    if dim < 2:
        raise InvalidConfig(f"expected movement is degenerate below dimension 2, got {dim}")
    quad = dim * dim + dim - 2.0
    return sum_w_sq * (
        0.5 * eta_b**2 * (1.0 + 4.0 * eta_sigma**2 * sum_w_sq / dim) * quad
        + eta_sigma**2
    )


def noise_floor(dim: int, eta_sigma: float, eta_b: float, sum_w_sq: float) -> float:
    """Expected squared covariance movement under a random objective, with the
    exponential update moments resummed instead of Taylor-truncated.

    Same derivation as expected_kl_norm, but the step-size and shape factors
    keep their exponential form under a Gaussian moment closure:

        E* = d/2 * (M4 * exp(2*eta_b^2*v) - 2*M2 * exp(eta_b^2*v/2) + 1),
        v = (d^2 + d - 2) * sum_w_sq / d,   M_a = exp(a^2*eta_sigma^2*sum_w_sq/(4d))

    Agrees with expected_kl_norm to second order in the rates (the regimes the
    closed form is quoted for), but keeps growing where the quadratic
    truncation flattens, so a maximum-rate phase still measures its own noise
    honestly and the rates can retreat from the ceiling.
    """
    if dim < 2:
        raise InvalidConfig(f"expected movement is degenerate below dimension 2, got {dim}")
    v = (dim * dim + dim - 2.0) * sum_w_sq / dim
    m2 = math.exp(eta_sigma**2 * sum_w_sq / dim)
    m4 = math.exp(4.0 * eta_sigma**2 * sum_w_sq / dim)
    return 0.5 * dim * (
        m4 * math.exp(2.0 * eta_b**2 * v) - 2.0 * m2 * math.exp(0.5 * eta_b**2 * v) + 1.0
    )


def gamma_update(gamma: float, beta: float) -> float:
    """One step of the noise-baseline recurrence; fixed point is exactly 1.

    The increment is computed as 2*beta - beta*beta (not beta*(2-beta)): at
    the standard beta = 0.2 this makes the first step exactly 0.36 and the
    fixed point exactly 1 in floating point. The clamp guards the gamma <= 1
    invariant against rounding at other beta values.
    """
    return min((1.0 - beta) ** 2 * gamma + (2.0 * beta - beta * beta), 1.0)


def path_update(
    state: LrAdaptState,
    sigma_old: float,
    b_old: np.ndarray,
    sigma_new: float,
    b_new: np.ndarray,
    sum_w_sq: float,
    beta: float = 0.2,
) -> LrAdaptState:
    """Accumulate one whitened, noise-normalized covariance movement.

    The movement delta = Sigma_new - Sigma_old is whitened on both sides by
    Sigma_old^(-1/2) and divided by the square root of its expected squared
    magnitude at the current rates. Computed in sigma-free form,
    C_old^(-1/2) ((sigma_new/sigma_old)^2 C_new - C_old) C_old^(-1/2),
    which is algebraically identical and makes the scale invariance in sigma
    exact. The new squared length trace(path^2)/2 is stored in path_length.

    Whitening eigenvalues are floored at 1e-12 times the largest: the path is
    a diagnostic, and a transiently ill-conditioned covariance (a maximum-rate
    phase can produce one) must not kill the run the sampler itself survives.
    An extremely long path then keeps the rates pinned until conditioning
    recovers.
    """
    c_old = symmetrize(b_old @ b_old.T)
    c_new = symmetrize(b_new @ b_new.T)
    dsigma_sq = (sigma_new / sigma_old) ** 2
    w, q = sym_eigen(c_old)
    if not (np.isfinite(w[0]) and w[0] > 0):
        raise SingularMatrix(f"covariance degenerated: largest eigenvalue {w[0]}")
    w = np.maximum(w, w[0] * 1e-12)
    root = symmetrize((q / np.sqrt(w)) @ q.T)
    whitened = symmetrize(root @ (dsigma_sq * c_new - c_old) @ root)
    norm = math.sqrt(
        noise_floor(c_old.shape[0], state.eta_sigma, state.eta_b, sum_w_sq)
    )
    path = (1.0 - beta) * state.path + math.sqrt(beta * (2.0 - beta)) * whitened / norm
    length = 0.5 * float(np.sum(path * path))
    return replace(state, path=path, path_length=length)


def lr_update(state: LrAdaptState, config: LrAdaptConfig) -> LrAdaptState:
    """Multiplicative rate update from the current path length and baseline.

    Each rate is multiplied by exp(gain * (length / alpha - gamma)) and
    clipped to its [min, max] interval. The exponent is capped before exp():
    anything that large is clipped to the maximum anyway, and an extremely
    long path must not overflow the update.
    """

    def adjusted(eta: float, alpha: float, gain: float, lo: float, hi: float) -> float:
        exponent = min(gain * (state.path_length / alpha - state.gamma), 700.0)
        return min(max(eta * math.exp(exponent), lo), hi)

    return replace(
        state,
        eta_sigma=adjusted(
            state.eta_sigma, config.alpha_sigma, config.gain_sigma,
            config.eta_sigma_min, config.eta_sigma_max,
        ),
        eta_b=adjusted(
            state.eta_b, config.alpha_b, config.gain_b,
            config.eta_b_min, config.eta_b_max,
        ),
    )


def step(
    state: LrAdaptState,
    old_dist,
    new_dist,
    config: LrAdaptConfig,
    sum_w_sq: float,
) -> LrAdaptState:
    """Full post-generation adaptation: path, baseline, then rates.

    Runs after the parameter update that used the state's current rates; the
    rates in the returned state apply to the next generation.
    """
    state = path_update(
        state,
        old_dist.sigma,
        old_dist.b,
        new_dist.sigma,
        new_dist.b,
        sum_w_sq,
        beta=config.beta,
    )
    state = replace(state, gamma=gamma_update(state.gamma, config.beta))
    return lr_update(state, config)
