"""SAC with a critic ensemble and variance-based intrinsic reward."""

from .critic_ensemble import CriticEnsemble, polyak_update
from .intrinsic import bellman_target, critic_variance, minmax_scale, mix_reward
from .registry import ALGORITHMS, build_agent
from .sac_var import EntropyMode, SacVarAgent, SacVarConfig, TrainStepLog
from .training import METRIC_NAMES, TRAIN_METRICS, evaluate, train

__all__ = [
    "CriticEnsemble",
    "polyak_update",
    "bellman_target",
    "critic_variance",
    "minmax_scale",
    "mix_reward",
    "ALGORITHMS",
    "build_agent",
    "EntropyMode",
    "SacVarAgent",
    "SacVarConfig",
    "TrainStepLog",
    "METRIC_NAMES",
    "TRAIN_METRICS",
    "evaluate",
    "train",
]
