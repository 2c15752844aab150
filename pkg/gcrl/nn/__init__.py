"""Minimal dense network engine: MLP, Adam and the squashed Gaussian head."""

from .mlp import Activation, Mlp, OutputActivation
from .optim import AdamState, adam_step
from .squashed_gaussian import (
    LOG_STD_MAX,
    LOG_STD_MIN,
    deterministic_action,
    gaussian_tanh_backward,
    gaussian_tanh_sample,
)
from .checkpoint import load_adam, load_mlp, save_adam, save_mlp

__all__ = [
    "Activation",
    "Mlp",
    "OutputActivation",
    "AdamState",
    "adam_step",
    "LOG_STD_MAX",
    "LOG_STD_MIN",
    "deterministic_action",
    "gaussian_tanh_backward",
    "gaussian_tanh_sample",
    "load_adam",
    "load_mlp",
    "save_adam",
    "save_mlp",
]
