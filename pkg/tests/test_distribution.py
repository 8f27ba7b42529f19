"""Search distribution: sampling identities, covariance, determinant policy."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nes_lra import InvalidConfig, SearchDistribution, sample
from nes_lra.distribution import require_unit_det, with_unit_det


def test_identity_transform_returns_z_bitwise():
    dist = SearchDistribution(np.zeros(4), 1.0, np.eye(4))
    pop = sample(dist, 6, np.random.default_rng(0))
    assert np.array_equal(pop.x, pop.z)


def test_affine_identity_componentwise():
    d = 5
    dist = SearchDistribution(np.full(d, 3.0), 2.0, np.eye(d))
    pop = sample(dist, 8, np.random.default_rng(1))
    assert np.array_equal(pop.x, 3.0 + 2.0 * pop.z)


def test_general_shape_matrix_affine_identity():
    rng = np.random.default_rng(2)
    b = np.array([[2.0, 0.3], [0.0, 0.5]])
    b = require_unit_det(b / np.linalg.det(b) ** (1 / 2))
    dist = SearchDistribution([1.0, -1.0], 0.7, b)
    pop = sample(dist, 5, rng)
    for z, x, _ in pop:
        assert_allclose(x, dist.mean + dist.sigma * b @ z, atol=1e-13)


def test_law_of_large_numbers():
    d = 10
    dist = SearchDistribution(np.full(d, 3.0), 2.0, np.eye(d))
    pop = sample(dist, 10_000, np.random.default_rng(9))
    assert np.all(np.abs(pop.x.mean(axis=0) - 3.0) < 0.1)
    var = pop.x.var(axis=0)
    assert np.all(np.abs(var - 4.0) < 0.15 * 4.0)


def test_seed_reproducibility_bitwise():
    dist = SearchDistribution(np.zeros(3), 1.5, np.eye(3))
    a = sample(dist, 20, np.random.default_rng(1234))
    b = sample(dist, 20, np.random.default_rng(1234))
    assert np.array_equal(a.z, b.z) and np.array_equal(a.x, b.x)


def test_population_size_below_two_rejected():
    dist = SearchDistribution(np.zeros(2), 1.0, np.eye(2))
    with pytest.raises(InvalidConfig):
        sample(dist, 1, np.random.default_rng(0))


class TestCovariance:
    def test_scaled_identity(self):
        dist = SearchDistribution(np.zeros(3), 2.0, np.eye(3))
        assert_allclose(dist.covariance(), 4.0 * np.eye(3), atol=1e-14)

    def test_diagonal_unit_det(self):
        dist = SearchDistribution(np.zeros(2), 1.0, np.diag([2.0, 0.5]))
        assert_allclose(dist.covariance(), np.diag([4.0, 0.25]), atol=1e-14)

    def test_det_of_covariance_is_sigma_power(self):
        rng = np.random.default_rng(7)
        d = 4
        m = rng.standard_normal((d, d))
        det = np.linalg.det(m)
        if det < 0:
            m[0] = -m[0]
            det = -det
        b = m / det ** (1 / d)
        dist = SearchDistribution(np.zeros(d), 1.7, b)
        assert_allclose(np.linalg.det(dist.covariance()), 1.7 ** (2 * d), rtol=1e-6)


class TestDetPolicy:
    def test_validation_rejects_bad_user_matrix(self):
        with pytest.raises(InvalidConfig):
            require_unit_det(np.diag([2.0, 1.0]))

    def test_renormalization_preserves_covariance(self):
        b = np.diag([2.0, 0.5]) * 1.001  # det drifted to ~1.002
        dist = with_unit_det(np.zeros(2), 3.0, b)
        assert abs(np.linalg.det(dist.b) - 1.0) < 1e-9
        assert_allclose(dist.covariance(), 9.0 * (b @ b.T), rtol=1e-12)

    def test_no_rescale_within_tolerance(self):
        b = np.eye(2) * (1.0 + 1e-8)
        dist = with_unit_det(np.zeros(2), 1.0, b)
        assert np.array_equal(dist.b, b)


def test_invalid_parameters_rejected():
    with pytest.raises(InvalidConfig):
        SearchDistribution(np.zeros(3), -1.0, np.eye(3))
    with pytest.raises(InvalidConfig):
        SearchDistribution(np.zeros(3), np.inf, np.eye(3))
    with pytest.raises(InvalidConfig):
        SearchDistribution([np.nan, 0.0], 1.0, np.eye(2))
    with pytest.raises(InvalidConfig):
        SearchDistribution(np.zeros(3), 1.0, np.eye(2))
