"""Intrinsic reward from critic-ensemble disagreement and reward mixing."""

import numpy as np

from ..exceptions import ConfigError, ShapeError


def critic_variance(q_values: np.ndarray) -> np.ndarray:
    """Population variance across the ensemble axis of a ``(batch, N)`` matrix.

    Rows whose values all agree return exactly 0.
    """
    q = np.asarray(q_values, dtype=np.float64)
    if q.ndim != 2:
        raise ShapeError(f"Expected a (batch, n_critics) matrix, got shape {q.shape}")
    if q.shape[1] < 2:
        raise ConfigError(f"Critic variance needs at least 2 critics, got {q.shape[1]}")
    deviations = q - q.mean(axis=1, keepdims=True)
    variance = np.mean(deviations * deviations, axis=1)
    return np.where(np.all(q == q[:, :1], axis=1), 0.0, variance)


def minmax_scale(values: np.ndarray) -> np.ndarray:
    """Scale to ``[0, 1]`` by batch min and max; a constant batch maps to zeros."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ShapeError("Cannot min-max scale an empty vector")
    low, high = v.min(), v.max()
    if high == low:
        return np.zeros_like(v)
    return np.clip((v - low) / (high - low), 0.0, 1.0)


def mix_reward(r_e: np.ndarray, r_i: np.ndarray, eta: float) -> np.ndarray:
    """Convex combination ``(1 - eta) * r_e + eta * r_i``."""
    extrinsic = np.asarray(r_e, dtype=np.float64)
    intrinsic = np.asarray(r_i, dtype=np.float64)
    if extrinsic.shape != intrinsic.shape:
        raise ShapeError(
            f"Reward shapes differ: extrinsic {extrinsic.shape}, intrinsic {intrinsic.shape}"
        )
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"weight_critic_var must lie in [0, 1], got {eta}")
    return (1.0 - eta) * extrinsic + eta * intrinsic


def bellman_target(reward_mod: np.ndarray, dones: np.ndarray, gamma: float,
                   next_q: np.ndarray) -> np.ndarray:
    """Soft Bellman target; the bootstrap term vanishes on terminal rows."""
    return reward_mod + (1.0 - dones) * gamma * next_q
