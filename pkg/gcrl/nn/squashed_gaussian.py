"""Tanh-squashed diagonal Gaussian policy head.

The head output is the concatenation ``[mean, log_std]``. With noise
``eps ~ N(0, I)`` the action is ``tanh(mean + exp(log_std) * eps)`` and the
log-probability includes the change-of-variables term of the tanh.
"""

from typing import Tuple

import numpy as np

from ..exceptions import NumericError, ShapeError

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _split(
    head_output: np.ndarray, noise: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    head = np.asarray(head_output, dtype=np.float64)
    eps = np.asarray(noise, dtype=np.float64)
    if head.shape[-1] % 2:
        raise ShapeError(f"Head output must hold mean and log_std, got {head.shape}")
    action_dim = head.shape[-1] // 2
    if eps.shape != head.shape[:-1] + (action_dim,):
        raise ShapeError(f"Noise shape {eps.shape} does not match head {head.shape}")
    if not np.all(np.isfinite(head)):
        raise NumericError("Non-finite policy head output", {"head_output": head.tolist()})
    mean = head[..., :action_dim]
    raw_log_std = head[..., action_dim:]
    log_std = np.clip(raw_log_std, LOG_STD_MIN, LOG_STD_MAX)
    return mean, raw_log_std, log_std, eps


def log_one_minus_tanh_sq(u: np.ndarray) -> np.ndarray:
    """``log(1 - tanh(u)^2)`` without cancellation for large ``|u|``."""
    return 2.0 * (np.log(2.0) - u - np.logaddexp(0.0, -2.0 * u))


def gaussian_tanh_sample(head_output: np.ndarray, noise: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reparameterized squashed sample.

    Works on a single head vector (returns a scalar log-prob) or on a batch
    of rows (returns one log-prob per row).
    """
    mean, _, log_std, eps = _split(head_output, noise)
    u = mean + np.exp(log_std) * eps
    action = np.tanh(u)
    log_prob = np.sum(
        -0.5 * eps * eps - log_std - _HALF_LOG_2PI - log_one_minus_tanh_sq(u),
        axis=-1,
    )
    return action, log_prob


def gaussian_tanh_backward(
    head_output: np.ndarray,
    noise: np.ndarray,
    grad_action: np.ndarray,
    grad_log_prob: np.ndarray,
) -> np.ndarray:
    """Gradient of a loss w.r.t. the raw head output.

    ``grad_action`` is dL/d action, ``grad_log_prob`` is dL/d log_prob (one
    value per row). Log-std entries outside the clamp receive zero gradient.
    """
    mean, raw_log_std, log_std, eps = _split(head_output, noise)
    std = np.exp(log_std)
    action = np.tanh(mean + std * eps)
    g_logp = np.asarray(grad_log_prob, dtype=np.float64)[..., np.newaxis]

    # d log_prob / du = 2 tanh(u); d action / du = 1 - tanh(u)^2
    grad_u = np.asarray(grad_action, dtype=np.float64) * (1.0 - action * action) + g_logp * 2.0 * action
    grad_mean = grad_u
    grad_log_std = grad_u * std * eps - g_logp
    inside = (raw_log_std >= LOG_STD_MIN) & (raw_log_std <= LOG_STD_MAX)
    grad_log_std = grad_log_std * inside
    return np.concatenate([grad_mean, grad_log_std], axis=-1)


def deterministic_action(head_output: np.ndarray) -> np.ndarray:
    """Mean action ``tanh(mean)`` used for evaluation."""
    head = np.asarray(head_output, dtype=np.float64)
    if not np.all(np.isfinite(head)):
        raise NumericError("Non-finite policy head output", {"head_output": head.tolist()})
    return np.tanh(head[..., : head.shape[-1] // 2])
