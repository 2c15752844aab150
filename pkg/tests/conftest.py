#!/usr/bin/env python3
# -*- coding:utf-8 -*-

"""
Pytest configuration file
"""

import os
import sys

import matplotlib
import numpy as np
import pytest

# Add the parent directory to Python path so we can import gcrl
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

matplotlib.use("Agg")

from gcrl.config.centralized_config import CONFIG_DIR_ENV, ConfigManager, ConfigPaths  # noqa: E402
from gcrl.config.loader import resolve_config  # noqa: E402
from gcrl.track.file_store import TRACK_ROOT_ENV, FileTracker  # noqa: E402

# small networks and budgets shared by the training tests
TINY_OVERRIDES = [
    "algorithm.hidden_sizes=[16, 16]",
    "algorithm.batch_size=16",
    "algorithm.learning_starts=50",
    "algorithm.buffer_size=5000",
    "algorithm.eval_freq=100",
    "algorithm.n_eval_episodes=2",
]


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    """Shipped configs and a per-test tracking root."""
    monkeypatch.delenv(CONFIG_DIR_ENV, raising=False)
    monkeypatch.setenv(TRACK_ROOT_ENV, str(tmp_path / "mlruns"))
    ConfigManager.initialize(ConfigPaths.from_environment())
    ConfigManager().clear_cache()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tracker(tmp_path):
    return FileTracker(tmp_path / "mlruns")


@pytest.fixture
def tiny_tree():
    """Factory for small resolved configs: ``tiny_tree("env=PlanarPush-v0", ...)``."""

    def make(*tokens, total_steps=200):
        return resolve_config(
            list(TINY_OVERRIDES) + [f"algorithm.total_steps={total_steps}"] + list(tokens)
        )

    return make


@pytest.fixture
def tiny_tokens():
    return list(TINY_OVERRIDES)
