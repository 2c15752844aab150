import numpy as np
import pytest

from gcrl.exceptions import NumericError, ShapeError
from gcrl.nn import AdamState, adam_step


class TestAdam:
    """Bias-corrected Adam."""

    def test_zero_gradient_leaves_params(self):
        params = np.array([1.0, -2.0, 3.0])
        state = AdamState.zeros(3, lr=0.1)
        adam_step(state, params, np.zeros(3))
        np.testing.assert_array_equal(params, [1.0, -2.0, 3.0])
        assert state.step == 1

    def test_first_step_is_lr(self):
        """Scalar 1.0 with gradient 1.0 and lr 0.1 moves to about 0.9."""
        params = np.array([1.0])
        adam_step(AdamState.zeros(1, lr=0.1), params, np.array([1.0]))
        assert params[0] == pytest.approx(0.9, abs=1e-6)

    def test_matches_formula_over_steps(self):
        """Three steps against the textbook recurrence."""
        params = np.array([0.5])
        state = AdamState.zeros(1, lr=0.01)
        m = v = 0.0
        expected = 0.5
        for t, g in enumerate([0.3, -0.1, 0.2], start=1):
            adam_step(state, params, np.array([g]))
            m = 0.9 * m + 0.1 * g
            v = 0.999 * v + 0.001 * g * g
            expected -= 0.01 * (m / (1 - 0.9**t)) / (np.sqrt(v / (1 - 0.999**t)) + 1e-8)
        assert params[0] == pytest.approx(expected, rel=1e-12)
        assert state.step == 3

    def test_deterministic(self, rng):
        grads = rng.normal(size=(10, 4))
        results = []
        for _ in range(2):
            params = np.ones(4)
            state = AdamState.zeros(4)
            for g in grads:
                adam_step(state, params, g)
            results.append(params)
        np.testing.assert_array_equal(results[0], results[1])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            adam_step(AdamState.zeros(3), np.zeros(3), np.zeros(2))

    def test_non_finite_gradient(self):
        with pytest.raises(NumericError):
            adam_step(AdamState.zeros(2), np.zeros(2), np.array([np.nan, 0.0]))
