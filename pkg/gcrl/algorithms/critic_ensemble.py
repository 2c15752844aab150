"""N independent Q-networks with Polyak-averaged target copies."""

import logging
from typing import List, Sequence

import numpy as np

from ..exceptions import ConfigError, ShapeError
from ..nn import Mlp

logger = logging.getLogger(__name__)

MAX_CRITICS = 8


def polyak_update(targets: Sequence[Mlp], live: Sequence[Mlp], tau: float) -> None:
    """``target <- (1 - tau) * target + tau * live`` for every parameter."""
    if len(targets) != len(live):
        raise ShapeError(f"{len(targets)} targets for {len(live)} live networks")
    for target, source in zip(targets, live):
        if target.params.shape != source.params.shape:
            raise ShapeError(
                f"Polyak shape mismatch: {target.params.shape} vs {source.params.shape}"
            )
        target.params[...] = (1.0 - tau) * target.params + tau * source.params


class CriticEnsemble:
    """Q-functions mapping ``observation || goal || action`` to a scalar."""

    def __init__(self, n_critics: int, input_dim: int, hidden_sizes: Sequence[int],
                 rng: np.random.Generator):
        if not 2 <= n_critics <= MAX_CRITICS:
            raise ConfigError(f"n_critics must lie in [2, {MAX_CRITICS}], got {n_critics}")
        layer_sizes = [input_dim, *hidden_sizes, 1]
        self.critics: List[Mlp] = [Mlp(layer_sizes, rng=rng) for _ in range(n_critics)]
        self.targets: List[Mlp] = [critic.copy() for critic in self.critics]

    @property
    def n_critics(self) -> int:
        return len(self.critics)

    @property
    def input_dim(self) -> int:
        return self.critics[0].input_size

    def values(self, inputs: np.ndarray) -> np.ndarray:
        """Live critic outputs, shape ``(batch, N)``."""
        return np.stack([critic.forward(inputs)[:, 0] for critic in self.critics], axis=1)

    def target_values(self, inputs: np.ndarray) -> np.ndarray:
        """Target critic outputs, shape ``(batch, N)``."""
        return np.stack([target.forward(inputs)[:, 0] for target in self.targets], axis=1)

    def update_targets(self, tau: float) -> None:
        polyak_update(self.targets, self.critics, tau)
