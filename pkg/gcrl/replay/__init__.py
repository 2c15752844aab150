"""Replay storage with hindsight experience replay."""

from .buffer import ReplayBuffer, SampledBatch, Transition

__all__ = ["ReplayBuffer", "SampledBatch", "Transition"]
