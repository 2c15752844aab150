import numpy as np
import pytest
from scipy import integrate, stats

from gcrl.exceptions import NumericError, ShapeError
from gcrl.nn import (
    LOG_STD_MAX,
    LOG_STD_MIN,
    deterministic_action,
    gaussian_tanh_backward,
    gaussian_tanh_sample,
)


class TestGaussianTanhSample:
    """Reparameterized squashed Gaussian."""

    def test_zero_mean_zero_noise(self):
        action, _ = gaussian_tanh_sample(np.array([0.0, 0.0, -1.0, 0.5]), np.zeros(2))
        np.testing.assert_array_equal(action, [0.0, 0.0])

    def test_actions_strictly_inside(self, rng):
        """10^5 draws stay inside (-1, 1)."""
        heads = np.concatenate([rng.normal(0, 1, size=(100000, 1)), rng.uniform(-3, 0.5, size=(100000, 1))], axis=1)
        action, log_prob = gaussian_tanh_sample(heads, rng.normal(size=(100000, 1)))
        assert np.all(np.abs(action) < 1.0)
        assert np.all(np.isfinite(log_prob))

    def test_log_prob_density_transform(self):
        """1-D log-prob equals the normal log-density minus log(1 - a^2)."""
        mean, log_std = 0.3, np.log(0.7)
        for eps in (-1.5, -0.2, 0.0, 0.8, 1.9):
            action, log_prob = gaussian_tanh_sample(np.array([mean, log_std]), np.array([eps]))
            u = mean + np.exp(log_std) * eps
            expected = stats.norm.logpdf(u, mean, np.exp(log_std)) - np.log(1 - np.tanh(u) ** 2)
            assert action[0] == pytest.approx(np.tanh(u))
            assert log_prob == pytest.approx(expected, abs=1e-6)

    def test_density_integrates_to_one(self):
        """The squashed density over (-1, 1) has unit mass."""
        mean, std = -0.4, 0.6
        head = np.array([mean, np.log(std)])

        def density(a):
            u = np.arctanh(a)
            _, log_prob = gaussian_tanh_sample(head, np.array([(u - mean) / std]))
            return np.exp(log_prob)

        total, _ = integrate.quad(density, -1 + 1e-12, 1 - 1e-12, limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_log_std_clamped(self):
        """log_std beyond the clamp behaves like the bound."""
        _, high = gaussian_tanh_sample(np.array([0.0, 10.0]), np.array([0.1]))
        _, bound = gaussian_tanh_sample(np.array([0.0, LOG_STD_MAX]), np.array([0.1]))
        assert high == bound
        _, low = gaussian_tanh_sample(np.array([0.0, -50.0]), np.array([0.1]))
        _, low_bound = gaussian_tanh_sample(np.array([0.0, LOG_STD_MIN]), np.array([0.1]))
        assert low == low_bound

    def test_non_finite_head(self):
        with pytest.raises(NumericError):
            gaussian_tanh_sample(np.array([np.nan, 0.0]), np.zeros(1))

    def test_noise_shape(self):
        with pytest.raises(ShapeError):
            gaussian_tanh_sample(np.zeros(4), np.zeros(3))

    def test_deterministic_action(self):
        np.testing.assert_allclose(deterministic_action(np.array([0.5, -0.5, 1.0, 1.0])),
                                   np.tanh([0.5, -0.5]))


class TestGaussianTanhBackward:
    """Gradient through the sample and its log-probability."""

    def test_matches_finite_differences(self, rng):
        head = np.concatenate([rng.normal(size=(4, 3)), rng.uniform(-1.5, 0.5, size=(4, 3))], axis=1)
        noise = rng.normal(size=(4, 3))
        grad_action = rng.normal(size=(4, 3))
        grad_log_prob = rng.normal(size=4)

        def loss(h):
            action, log_prob = gaussian_tanh_sample(h, noise)
            return float(np.sum(action * grad_action) + np.sum(log_prob * grad_log_prob))

        analytic = gaussian_tanh_backward(head, noise, grad_action, grad_log_prob)
        numeric = np.zeros_like(head)
        for idx in np.ndindex(head.shape):
            step = np.zeros_like(head)
            step[idx] = 1e-5
            numeric[idx] = (loss(head + step) - loss(head - step)) / 2e-5
        np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-7)

    def test_clamped_log_std_has_no_gradient(self):
        grad = gaussian_tanh_backward(np.array([0.1, 5.0]), np.array([0.3]),
                                      np.array([1.0]), np.array(1.0))
        assert grad[1] == 0.0
