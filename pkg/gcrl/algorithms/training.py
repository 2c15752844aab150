"""Collection loop, periodic evaluation and metric emission."""

import copy
import logging
from typing import TYPE_CHECKING, Dict, List, Optional, Protocol

import numpy as np

from ..envs.base import GoalEnv, GoalObservation
from ..exceptions import ShapeError
from ..replay import ReplayBuffer, Transition
from .sac_var import SacVarAgent, check_buffer_fits

if TYPE_CHECKING:
    from ..livemetrics.frames import SyncFrame

logger = logging.getLogger(__name__)

TRAIN_METRICS = (
    "critic_loss",
    "actor_loss",
    "alpha",
    "critic_variance_mean",
    "critic_variance_max",
    "intrinsic_reward_mean",
)
METRIC_NAMES = ("success_rate",) + TRAIN_METRICS

# evaluation episodes use their own seeds, disjoint from the collection seed
EVAL_SEED_OFFSET = 10_000


class Policy(Protocol):
    def act(self, observation: np.ndarray, deterministic: bool = False) -> np.ndarray: ...


class MetricSink(Protocol):
    def log_metric(self, name: str, value: float, step: int) -> None: ...

    def flush(self) -> None: ...


class FrameSink(Protocol):
    def emit(self, frame: "SyncFrame") -> None: ...


def evaluate(policy: Policy, env: GoalEnv, n_episodes: int, seed: int) -> float:
    """Fraction of deterministic episodes that end in the desired goal.

    Episode ``i`` is reset with seed ``seed + i``.
    """
    if n_episodes < 1:
        raise ShapeError(f"n_episodes must be >= 1, got {n_episodes}")
    successes = 0
    for i in range(n_episodes):
        obs = env.reset(seed=seed + i)
        while True:
            result = env.step(policy.act(obs.flatten(), deterministic=True))
            obs = result.obs
            if result.done:
                successes += int(result.is_success)
                break
    return successes / n_episodes


def make_replay_buffer(agent: SacVarAgent, env: GoalEnv) -> ReplayBuffer:
    return ReplayBuffer(
        capacity=agent.config.buffer_size,
        obs_dim=env.spec.obs_dim,
        goal_dim=env.spec.goal_dim,
        action_dim=env.spec.action_dim,
        compute_reward=env.compute_reward,
    )


def _make_frame(step: int, episode: int, env: GoalEnv,
                metrics: Dict[str, float]) -> "SyncFrame":
    from ..livemetrics.frames import SyncFrame

    return SyncFrame(step=step, episode=episode, env_frame=env.render_state(),
                     metrics=dict(metrics))


def train(
    agent: SacVarAgent,
    env: GoalEnv,
    total_steps: Optional[int] = None,
    tracker: Optional[MetricSink] = None,
    live_channel: Optional[FrameSink] = None,
    stream_writer: Optional[FrameSink] = None,
    eval_env: Optional[GoalEnv] = None,
) -> float:
    """Train ``agent`` on ``env`` and return the final evaluation success rate.

    Args:
        total_steps: environment steps; defaults to ``agent.config.total_steps``.
        tracker: receives every metric (``log_metric``); flushed on exit.
        live_channel: receives one :class:`SyncFrame` per environment step.
        stream_writer: like ``live_channel``, used to record the stream to disk.
        eval_env: environment for evaluation; a copy of ``env`` by default.
    """
    check_buffer_fits(agent.config, env.spec)
    cfg = agent.config
    total_steps = cfg.total_steps if total_steps is None else total_steps
    eval_env = eval_env if eval_env is not None else copy.deepcopy(env)
    eval_seed = cfg.seed + EVAL_SEED_OFFSET
    sinks: List[FrameSink] = [s for s in (live_channel, stream_writer) if s is not None]

    def log(name: str, value: float, step: int) -> None:
        if tracker is not None:
            tracker.log_metric(name, value, step)

    try:
        success_rate = evaluate(agent, eval_env, cfg.n_eval_episodes, eval_seed)
        log("success_rate", success_rate, 0)
        logger.info("step 0: success_rate=%.3f", success_rate)

        buffer = make_replay_buffer(agent, env)
        her_ratio = cfg.her_ratio if cfg.use_her else 0.0
        live_metrics: Dict[str, float] = {name: 0.0 for name in TRAIN_METRICS}
        live_metrics["success_rate"] = success_rate

        obs: GoalObservation = env.reset(seed=cfg.seed)
        episode: List[Transition] = []
        episode_index = 0
        last_eval_step = 0

        for step in range(1, total_steps + 1):
            if step <= cfg.learning_starts:
                action = agent.random_action()
            else:
                action = agent.act(obs.flatten())
            result = env.step(action)
            episode.append(
                Transition(obs=obs, action=np.clip(action, -1.0, 1.0), reward=result.reward,
                           next_obs=result.obs, done=result.done)
            )

            if step > cfg.learning_starts and buffer.size > 0 and step % cfg.train_freq == 0:
                for _ in range(cfg.gradient_steps):
                    batch = buffer.sample_her(cfg.batch_size, her_ratio, agent.replay_rng)
                    step_log = agent.train_step(batch)
                live_metrics.update(step_log.as_dict())
                if step % cfg.log_interval == 0:
                    for name in TRAIN_METRICS:
                        log(name, live_metrics[name], step)

            if step % cfg.eval_freq == 0 or step == total_steps:
                success_rate = evaluate(agent, eval_env, cfg.n_eval_episodes, eval_seed)
                live_metrics["success_rate"] = success_rate
                log("success_rate", success_rate, step)
                last_eval_step = step
                logger.info("step %d: success_rate=%.3f", step, success_rate)

            if sinks:
                metrics = dict(live_metrics)
                metrics["q_variance"] = agent.q_variance(obs.flatten(), np.clip(action, -1.0, 1.0))
                frame = _make_frame(step, episode_index, env, metrics)
                for sink in sinks:
                    sink.emit(frame)

            if result.done:
                buffer.store_episode(episode)
                episode = []
                episode_index += 1
                obs = env.reset()
            else:
                obs = result.obs

        logger.debug("Training finished after %d steps (last evaluation at %d)",
                     total_steps, last_eval_step)
        return success_rate
    finally:
        if tracker is not None:
            tracker.flush()
