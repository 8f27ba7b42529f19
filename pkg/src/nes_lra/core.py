"""One generation of xNES math: fitness shaping, natural-gradient estimation,
and the exponential parameter update.

Minimization convention throughout: the best (lowest) objective value gets the
first, largest shaping weight. Raw objective values never enter the update,
only their rank order, which makes every update invariant under strictly
increasing transformations of the objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import SearchDistribution, with_unit_det
from .errors import InvalidConfig, InvalidInput, NumericalFailure
from .symmat import sym_exp, symmetrize


def default_learning_rate(dim: int) -> float:
    """The recommended covariance learning rate, (3/5) * (3 + ln d) / (d * sqrt(d))."""
    if dim < 1:
        raise InvalidConfig(f"dimension must be positive, got {dim}")
    return 0.6 * (3.0 + math.log(dim)) / (dim * math.sqrt(dim))


@dataclass(frozen=True)
class ShapingWeights:
    """Rank-based utility weights for a population of size ``lam``.

    ``w[0]`` belongs to the best candidate. The weights sum to zero, are
    non-increasing in rank, and ``sum_w_sq`` caches sum(w**2), the reciprocal
    of the effective selection mass that scales rank-estimator variances.
    """

    lam: int
    w: np.ndarray
    sum_w_sq: float


def shaping_weights(lam: int) -> ShapingWeights:
    """Utility weights max(0, ln(lam/2 + 1) - ln i), normalized, centered by 1/lam."""
    if lam < 2:
        raise InvalidConfig(f"population size must be at least 2, got {lam}")
    raw = np.maximum(0.0, math.log(lam / 2.0 + 1.0) - np.log(np.arange(1, lam + 1)))
    w = raw / raw.sum() - 1.0 / lam
    return ShapingWeights(lam=lam, w=w, sum_w_sq=float(np.sum(w**2)))


@dataclass(frozen=True)
class NaturalGradient:
    """Estimated natural gradient of one generation.

    ``g_sigma`` is trace(g_m)/d and ``g_b`` is the traceless part of ``g_m``,
    so the step-size and shape updates split the covariance movement exactly.
    """

    g_delta: np.ndarray
    g_m: np.ndarray
    g_sigma: float
    g_b: np.ndarray


def estimate_gradient(weights: ShapingWeights, sorted_z: np.ndarray) -> NaturalGradient:
    """Natural gradient from z-vectors sorted best-first.

    g_delta = sum_i w_i z_i and g_m = sum_i w_i (z_i z_i^T - I); the identity
    part vanishes because the weights sum to zero, but it is kept explicit so
    the traceless invariant holds to rounding.
    """
    sorted_z = np.asarray(sorted_z, dtype=float)
    if sorted_z.ndim != 2 or sorted_z.shape[0] != weights.lam:
        raise InvalidInput(
            f"expected {weights.lam} sorted z-vectors, got shape {sorted_z.shape}"
        )
    d = sorted_z.shape[1]
    w = weights.w
    g_delta = w @ sorted_z
    g_m = np.einsum("i,ij,ik->jk", w, sorted_z, sorted_z) - w.sum() * np.eye(d)
    g_m = symmetrize(g_m)
    g_sigma = float(np.trace(g_m)) / d
    g_b = g_m - g_sigma * np.eye(d)
    return NaturalGradient(g_delta=g_delta, g_m=g_m, g_sigma=g_sigma, g_b=g_b)


def update(
    dist: SearchDistribution,
    grad: NaturalGradient,
    eta_m: float,
    eta_sigma: float,
    eta_b: float,
) -> SearchDistribution:
    """Exponential parameter update; returns a new distribution.

    m    <- m + eta_m * sigma * B @ g_delta
    sigma <- sigma * exp(eta_sigma / 2 * g_sigma)
    B    <- B @ exp(eta_b / 2 * g_b)

    g_b is traceless, so the B factor has determinant one and det(B) = 1 is
    preserved; residual floating-point drift is folded back into sigma.
    """
    for name, eta in (("eta_m", eta_m), ("eta_sigma", eta_sigma), ("eta_b", eta_b)):
        if not (math.isfinite(eta) and eta > 0):
            raise InvalidConfig(f"{name} must be positive and finite, got {eta}")
    mean = dist.mean + eta_m * dist.sigma * (dist.b @ grad.g_delta)
    exponent = 0.5 * eta_sigma * grad.g_sigma
    if exponent > 700.0:
        raise NumericalFailure(f"step-size update overflow: exponent {exponent:.3g}")
    sigma = dist.sigma * math.exp(exponent)
    b = dist.b @ sym_exp(0.5 * eta_b * grad.g_b)
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(b)) and math.isfinite(sigma)):
        raise NumericalFailure("parameter update produced non-finite values")
    if sigma <= 0.0:
        raise NumericalFailure(f"step-size underflowed to {sigma}")
    return with_unit_det(mean, sigma, b)
