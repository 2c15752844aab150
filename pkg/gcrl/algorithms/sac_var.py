"""Soft actor-critic with a critic ensemble and a variance-based intrinsic reward.

One gradient step (:meth:`SacVarAgent.train_step`) runs, in order:

1. sample next actions and log-probs from the current policy;
2. evaluate all target critics at the next state-action pairs and take the
   entropy-regularized minimum;
3. scale the population variance of those target values into ``[0, 1]``
   across the batch (intrinsic reward);
4. mix extrinsic and intrinsic reward with ``weight_critic_var``;
5. form the Bellman target, held constant for the critic gradients;
6. one Adam step per critic on the squared error to the target;
7. one Adam step for the actor on ``alpha * log_pi - min_i Q_i``;
8. one Adam step for ``log_alpha`` in auto-entropy mode;
9. Polyak update of the target critics.
"""

import logging
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import yaml

from ..envs.base import EnvSpec
from ..exceptions import ConfigError, NumericError, ShapeError, UnknownKeyError
from ..nn import (
    AdamState,
    Mlp,
    OutputActivation,
    adam_step,
    deterministic_action,
    gaussian_tanh_backward,
    gaussian_tanh_sample,
    load_adam,
    load_mlp,
    save_adam,
    save_mlp,
)
from ..replay import SampledBatch
from .critic_ensemble import MAX_CRITICS, CriticEnsemble
from .intrinsic import bellman_target, critic_variance, minmax_scale, mix_reward

logger = logging.getLogger(__name__)


class EntropyMode:
    AUTO = "auto"
    FIXED = "fixed"


@dataclass
class SacVarConfig:
    """Hyperparameters of one training run (the ``algorithm`` config subtree)."""

    name: str = "sac_var"
    weight_critic_var: float = 0.0
    use_intrinsic: bool = True
    n_critics: int = 2
    gamma: float = 0.98
    tau: float = 0.01
    learning_rate: float = 1e-3
    batch_size: int = 64
    hidden_sizes: List[int] = field(default_factory=lambda: [64, 64])
    entropy: str = EntropyMode.AUTO
    alpha: float = 0.2
    target_entropy: Optional[float] = None
    buffer_size: int = 100_000
    learning_starts: int = 1000
    train_freq: int = 1
    gradient_steps: int = 1
    use_her: bool = True
    her_ratio: float = 0.8
    total_steps: int = 50_000
    eval_freq: int = 2000
    n_eval_episodes: int = 10
    log_interval: int = 1
    seed: int = 0
    record_stream: bool = False

    def __post_init__(self) -> None:
        self.validate()

    @classmethod
    def from_tree(cls, tree: Mapping[str, Any]) -> "SacVarConfig":
        """Build from a resolved ``algorithm`` mapping; unknown keys are fatal."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(tree) - known)
        if unknown:
            raise UnknownKeyError(
                f"Unknown algorithm key(s): {', '.join('algorithm.' + k for k in unknown)}"
            )
        values = dict(tree)
        if "hidden_sizes" in values:
            values["hidden_sizes"] = [int(v) for v in values["hidden_sizes"]]
        return cls(**values)

    def validate(self) -> None:
        if not 0.0 <= self.weight_critic_var <= 1.0:
            raise ConfigError(f"weight_critic_var must lie in [0, 1], got {self.weight_critic_var}")
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau must lie in (0, 1], got {self.tau}")
        if not 2 <= self.n_critics <= MAX_CRITICS:
            raise ConfigError(f"n_critics must lie in [2, {MAX_CRITICS}], got {self.n_critics}")
        if self.learning_rate <= 0.0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.entropy not in (EntropyMode.AUTO, EntropyMode.FIXED):
            raise ConfigError(f"entropy must be 'auto' or 'fixed', got {self.entropy!r}")
        if self.alpha <= 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.her_ratio <= 1.0:
            raise ConfigError(f"her_ratio must lie in [0, 1], got {self.her_ratio}")
        for key in ("batch_size", "buffer_size", "train_freq", "gradient_steps",
                    "eval_freq", "n_eval_episodes", "log_interval"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1, got {getattr(self, key)}")
        for key in ("learning_starts", "total_steps"):
            if getattr(self, key) < 0:
                raise ConfigError(f"{key} must be >= 0, got {getattr(self, key)}")
        if not self.hidden_sizes or any(h < 1 for h in self.hidden_sizes):
            raise ConfigError(f"hidden_sizes must be positive, got {self.hidden_sizes}")
        if self.weight_critic_var > 0.0 and not self.use_intrinsic:
            warnings.warn(
                "weight_critic_var is set but the intrinsic reward is disabled; it has no effect"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def check_buffer_fits(config: SacVarConfig, env_spec: EnvSpec) -> None:
    """The replay buffer stores whole episodes, so it must hold the longest one."""
    if config.buffer_size < env_spec.max_episode_steps:
        raise ConfigError(
            f"buffer_size {config.buffer_size} is smaller than one episode of "
            f"{env_spec.name} ({env_spec.max_episode_steps} steps)"
        )


@dataclass
class TrainStepLog:
    """Scalars reported by one gradient step."""

    critic_loss: float
    actor_loss: float
    alpha: float
    critic_variance_mean: float
    critic_variance_max: float
    intrinsic_reward_mean: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


class SacVarAgent:
    """Actor, critic ensemble, entropy temperature and their optimizers.

    Random streams are split from ``config.seed``: network initialization,
    policy noise, exploration actions and replay sampling each get their
    own generator, so a fixed seed fixes the whole parameter trajectory.
    """

    def __init__(self, config: SacVarConfig, env_spec: EnvSpec):
        check_buffer_fits(config, env_spec)
        self.config = config
        self.env_spec = env_spec
        self.obs_input_dim = env_spec.obs_dim + env_spec.goal_dim
        self.action_dim = env_spec.action_dim

        init_seq, noise_seq, explore_seq, replay_seq = np.random.SeedSequence(config.seed).spawn(4)
        init_rng = np.random.default_rng(init_seq)
        self.noise_rng = np.random.default_rng(noise_seq)
        self.explore_rng = np.random.default_rng(explore_seq)
        self.replay_rng = np.random.default_rng(replay_seq)

        self.actor = Mlp(
            [self.obs_input_dim, *config.hidden_sizes, 2 * self.action_dim],
            output_activation=OutputActivation.TANH_GAUSSIAN_HEAD,
            rng=init_rng,
        )
        self.ensemble = CriticEnsemble(
            config.n_critics, self.obs_input_dim + self.action_dim, config.hidden_sizes, init_rng
        )
        self.log_alpha = np.array([np.log(config.alpha)])
        self.target_entropy = (
            float(config.target_entropy)
            if config.target_entropy is not None
            else -float(self.action_dim)
        )

        lr = config.learning_rate
        self.actor_optim = AdamState.zeros(self.actor.param_count, lr=lr)
        self.critic_optims = [AdamState.zeros(c.param_count, lr=lr) for c in self.ensemble.critics]
        self.alpha_optim = AdamState.zeros(1, lr=lr)
        self.n_updates = 0

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha[0]))

    def act(self, observation: np.ndarray, deterministic: bool = False) -> np.ndarray:
        """Action for one flattened ``observation || goal`` vector."""
        head = self.actor.forward(observation)
        if deterministic:
            return deterministic_action(head)
        noise = self.noise_rng.standard_normal(self.action_dim)
        action, _ = gaussian_tanh_sample(head, noise)
        return action

    def random_action(self) -> np.ndarray:
        return self.explore_rng.uniform(-1.0, 1.0, size=self.action_dim)

    def q_variance(self, observation: np.ndarray, action: np.ndarray) -> float:
        """Raw population variance of the live critics at one state-action pair."""
        x = np.concatenate([observation, action])[np.newaxis, :]
        return float(critic_variance(self.ensemble.values(x))[0])

    def _check_batch(self, batch: SampledBatch) -> None:
        n = len(batch)
        expected = {
            "observations": (n, self.obs_input_dim),
            "next_observations": (n, self.obs_input_dim),
            "actions": (n, self.action_dim),
            "dones": (n,),
        }
        for name, shape in expected.items():
            if getattr(batch, name).shape != shape:
                raise ShapeError(
                    f"Batch column {name} has shape {getattr(batch, name).shape}, expected {shape}"
                )

    def critic_targets(self, batch: SampledBatch) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Steps 1-5: ``(target_q, variance, intrinsic_reward)``.

        Only the actor and the target critics are read.
        """
        alpha = self.alpha
        noise = self.noise_rng.standard_normal((len(batch), self.action_dim))
        next_actions, next_log_prob = gaussian_tanh_sample(
            self.actor.forward(batch.next_observations), noise
        )
        target_inputs = np.concatenate([batch.next_observations, next_actions], axis=1)
        target_q_values = self.ensemble.target_values(target_inputs)
        next_q = target_q_values.min(axis=1) - alpha * next_log_prob

        variance = critic_variance(target_q_values)
        intrinsic = minmax_scale(variance)
        if self.config.use_intrinsic:
            reward_mod = mix_reward(batch.rewards, intrinsic, self.config.weight_critic_var)
        else:
            reward_mod = batch.rewards

        target_q = bellman_target(reward_mod, batch.dones, self.config.gamma, next_q)
        return target_q, variance, intrinsic

    def train_step(self, batch: SampledBatch) -> TrainStepLog:
        self._check_batch(batch)
        n = len(batch)
        alpha = self.alpha

        target_q, variance, intrinsic = self.critic_targets(batch)

        inputs = np.concatenate([batch.observations, batch.actions], axis=1)
        critic_loss = 0.0
        critic_grads = []
        for critic in self.ensemble.critics:
            error = critic.forward(inputs)[:, 0] - target_q
            critic_loss += 0.5 * float(np.mean(error * error))
            grad, _ = critic.backward((error / n)[:, np.newaxis])
            critic_grads.append(grad)
        self._check_finite("critic", critic_loss, batch, target_q)
        for critic, optim, grad in zip(self.ensemble.critics, self.critic_optims, critic_grads):
            adam_step(optim, critic.params, grad)

        noise = self.noise_rng.standard_normal((n, self.action_dim))
        head = self.actor.forward(batch.observations)
        actions, log_prob = gaussian_tanh_sample(head, noise)
        policy_inputs = np.concatenate([batch.observations, actions], axis=1)
        q_values = self.ensemble.values(policy_inputs)
        lowest = q_values.argmin(axis=1)
        actor_loss = float(np.mean(alpha * log_prob - q_values[np.arange(n), lowest]))

        grad_action = np.zeros_like(actions)
        for i, critic in enumerate(self.ensemble.critics):
            mask = lowest == i
            if not np.any(mask):
                continue
            # critic caches still hold the forward pass on policy_inputs
            upstream = np.where(mask, -1.0 / n, 0.0)[:, np.newaxis]
            _, grad_inputs = critic.backward(upstream)
            grad_action += grad_inputs[:, self.obs_input_dim:]
        grad_head = gaussian_tanh_backward(head, noise, grad_action, np.full(n, alpha / n))
        actor_grad, _ = self.actor.backward(grad_head)

        self._check_finite("actor", actor_loss, batch, target_q)
        adam_step(self.actor_optim, self.actor.params, actor_grad)

        if self.config.entropy == EntropyMode.AUTO:
            alpha_grad = -np.mean(log_prob + self.target_entropy)
            adam_step(self.alpha_optim, self.log_alpha, np.array([alpha_grad]))

        self.ensemble.update_targets(self.config.tau)
        self.n_updates += 1

        return TrainStepLog(
            critic_loss=critic_loss,
            actor_loss=actor_loss,
            alpha=alpha,
            critic_variance_mean=float(variance.mean()),
            critic_variance_max=float(variance.max()),
            intrinsic_reward_mean=float(intrinsic.mean()),
        )

    def _check_finite(self, which: str, loss: float, batch: SampledBatch,
                      target_q: np.ndarray) -> None:
        if np.isfinite(loss):
            return
        diagnostics = {
            "update": self.n_updates,
            f"{which}_loss": loss,
            "alpha": self.alpha,
            "reward_range": [float(batch.rewards.min()), float(batch.rewards.max())],
            "target_q_finite": int(np.isfinite(target_q).sum()),
            "critic_params_finite": [
                bool(np.all(np.isfinite(c.params))) for c in self.ensemble.critics
            ],
        }
        logger.error("Non-finite loss at update %d: %s", self.n_updates, diagnostics)
        raise NumericError(f"Non-finite {which} loss during train_step", diagnostics)

    def parameter_vector(self) -> np.ndarray:
        """All learnable values concatenated; used to compare trajectories."""
        parts = [self.actor.params]
        parts += [c.params for c in self.ensemble.critics]
        parts += [t.params for t in self.ensemble.targets]
        parts.append(self.log_alpha)
        return np.concatenate(parts)

    def save(self, directory: Union[str, Path]) -> Path:
        """Write networks, optimizer states and temperature under ``directory``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        save_mlp(self.actor, directory / "actor.mlp")
        save_adam(self.actor_optim, directory / "actor_optim.npz")
        for i, (critic, target, optim) in enumerate(
            zip(self.ensemble.critics, self.ensemble.targets, self.critic_optims)
        ):
            save_mlp(critic, directory / f"critic_{i}.mlp")
            save_mlp(target, directory / f"critic_target_{i}.mlp")
            save_adam(optim, directory / f"critic_{i}_optim.npz")
        save_adam(self.alpha_optim, directory / "alpha_optim.npz")
        state = {
            "log_alpha": float(self.log_alpha[0]),
            "n_updates": self.n_updates,
            "env": asdict(self.env_spec),
            "algorithm": self.config.to_dict(),
        }
        with open(directory / "agent.yaml", "w", encoding="utf-8") as f:
            yaml.safe_dump(state, f, sort_keys=False)
        logger.info("Saved checkpoint to %s", directory)
        return directory

    @classmethod
    def load(cls, directory: Union[str, Path]) -> "SacVarAgent":
        directory = Path(directory)
        with open(directory / "agent.yaml", "r", encoding="utf-8") as f:
            state = yaml.safe_load(f)
        agent = cls(SacVarConfig.from_tree(state["algorithm"]), EnvSpec(**state["env"]))
        agent.actor = load_mlp(directory / "actor.mlp")
        agent.actor_optim = load_adam(directory / "actor_optim.npz")
        for i in range(agent.ensemble.n_critics):
            agent.ensemble.critics[i] = load_mlp(directory / f"critic_{i}.mlp")
            agent.ensemble.targets[i] = load_mlp(directory / f"critic_target_{i}.mlp")
            agent.critic_optims[i] = load_adam(directory / f"critic_{i}_optim.npz")
        agent.alpha_optim = load_adam(directory / "alpha_optim.npz")
        agent.log_alpha = np.array([state["log_alpha"]])
        agent.n_updates = int(state["n_updates"])
        return agent
