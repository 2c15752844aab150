
import numpy as np
import pytest

from gcrl.algorithms import SacVarAgent, SacVarConfig, build_agent, evaluate, train
from gcrl.algorithms.training import METRIC_NAMES
from gcrl.envs import PlanarPushEnv, PointReachEnv
from gcrl.exceptions import ConfigError, NumericError, UnknownComponentError, UnknownKeyError
from gcrl.livemetrics import DropPolicy, MetricChannel
from gcrl.replay import SampledBatch

TINY = dict(hidden_sizes=[16, 16], batch_size=16, learning_starts=50, buffer_size=5000,
            eval_freq=100, n_eval_episodes=2)


def make_agent(env, **overrides):
    return SacVarAgent(SacVarConfig(**{**TINY, **overrides}), env.spec)


def random_batch(agent, rng, n=16, dones=None):
    obs_dim = agent.obs_input_dim
    return SampledBatch(
        observations=rng.uniform(0, 1, size=(n, obs_dim)),
        actions=rng.uniform(-1, 1, size=(n, agent.action_dim)),
        rewards=-rng.integers(0, 2, size=n).astype(float),
        next_observations=rng.uniform(0, 1, size=(n, obs_dim)),
        dones=np.zeros(n) if dones is None else dones,
        achieved_goals=np.zeros((n, 2)),
        desired_goals=np.zeros((n, 2)),
        relabeled=np.zeros(n, dtype=bool),
        episode_ids=np.zeros(n, dtype=int),
        steps=np.zeros(n, dtype=int),
        goal_steps=np.zeros(n, dtype=int),
    )


class RecordingTracker:
    def __init__(self):
        self.points = []
        self.flushed = 0

    def log_metric(self, name, value, step):
        self.points.append((name, value, step))

    def flush(self):
        self.flushed += 1


class GreedyPolicy:
    """Moves straight to the goal of a flattened PointReach observation."""

    def act(self, observation, deterministic=False):
        position, goal = observation[:2], observation[2:]
        return np.clip((goal - position) / 0.05, -1.0, 1.0)


class TestSacVarConfig:
    def test_unknown_key(self):
        with pytest.raises(UnknownKeyError):
            SacVarConfig.from_tree({"gama": 0.9})

    def test_ranges(self):
        for bad in ({"weight_critic_var": 1.2}, {"gamma": 1.0}, {"tau": 0.0}, {"n_critics": 1}, {"n_critics": 9}):
            with pytest.raises(ConfigError):
                SacVarConfig(**bad)

    def test_gamma_zero_allowed(self):
        assert SacVarConfig(gamma=0.0).gamma == 0.0

    def test_weight_without_intrinsic_warns(self):
        with pytest.warns(UserWarning):
            SacVarConfig(weight_critic_var=0.5, use_intrinsic=False)

    def test_buffer_smaller_than_episode(self):
        """Rejected before any data is collected."""
        with pytest.raises(ConfigError, match="smaller than one episode"):
            make_agent(PlanarPushEnv(), buffer_size=60)

    def test_buffer_of_one_episode(self):
        env = PlanarPushEnv()
        agent = make_agent(env, buffer_size=env.spec.max_episode_steps)
        assert agent.config.buffer_size == 100

    def test_train_checks_the_env_it_is_given(self):
        agent = make_agent(PointReachEnv(), buffer_size=60)
        with pytest.raises(ConfigError):
            train(agent, PlanarPushEnv(), total_steps=150)

    def test_build_agent_unknown_name(self):
        with pytest.raises(UnknownComponentError):
            build_agent({"name": "td3"}, PointReachEnv().spec)


class TestTrainStep:
    """One gradient step."""

    def test_log_fields_finite(self, rng):
        agent = make_agent(PointReachEnv(), weight_critic_var=0.5)
        log = agent.train_step(random_batch(agent, rng))
        assert all(np.isfinite(v) for v in log.as_dict().values())
        assert 0.0 <= log.intrinsic_reward_mean <= 1.0
        assert agent.n_updates == 1

    def test_terminal_rows_target_reward(self, rng):
        agent = make_agent(PointReachEnv(), use_intrinsic=False)
        batch = random_batch(agent, rng, dones=np.ones(16))
        target_q, _, _ = agent.critic_targets(batch)
        np.testing.assert_array_equal(target_q, batch.rewards)

    def test_intrinsic_range_bounds_reward(self, rng):
        agent = make_agent(PointReachEnv(), weight_critic_var=0.25)
        batch = random_batch(agent, rng, dones=np.ones(16))
        target_q, _, intrinsic = agent.critic_targets(batch)
        assert np.all((intrinsic >= 0.0) & (intrinsic <= 1.0))
        assert np.all(target_q >= 0.75 * -1.0) and np.all(target_q <= 0.25)

    def test_targets_do_not_touch_live_critics(self, rng):
        agent = make_agent(PointReachEnv())
        before = [c.params.copy() for c in agent.ensemble.critics]
        agent.critic_targets(random_batch(agent, rng))
        for critic, saved in zip(agent.ensemble.critics, before):
            np.testing.assert_array_equal(critic.params, saved)

    def test_eta_zero_matches_disabled_branch(self, rng):
        batch = random_batch(make_agent(PointReachEnv()), rng)
        a = make_agent(PointReachEnv(), weight_critic_var=0.0, use_intrinsic=True)
        b = make_agent(PointReachEnv(), weight_critic_var=0.0, use_intrinsic=False)
        for _ in range(5):
            log_a, log_b = a.train_step(batch), b.train_step(batch)
            assert log_a.critic_loss == log_b.critic_loss
            assert log_a.actor_loss == log_b.actor_loss
        np.testing.assert_array_equal(a.parameter_vector(), b.parameter_vector())

    def test_fixed_entropy_keeps_alpha(self, rng):
        agent = make_agent(PointReachEnv(), entropy="fixed", alpha=0.1)
        agent.train_step(random_batch(agent, rng))
        assert agent.alpha == pytest.approx(0.1)

    def test_nan_critic_raises_numeric_error(self, rng):
        agent = make_agent(PointReachEnv())
        agent.ensemble.targets[0].params[:] = np.nan
        with pytest.raises(NumericError) as excinfo:
            agent.train_step(random_batch(agent, rng))
        assert excinfo.value.diagnostics

    def test_checkpoint_round_trip(self, tmp_path, rng):
        agent = make_agent(PlanarPushEnv(), n_critics=3)
        agent.train_step(random_batch(agent, rng))
        loaded = SacVarAgent.load(agent.save(tmp_path / "ckpt"))
        np.testing.assert_array_equal(loaded.parameter_vector(), agent.parameter_vector())
        assert loaded.n_updates == 1
        assert loaded.critic_optims[2].step == agent.critic_optims[2].step


class TestEvaluate:
    def test_greedy_policy_always_succeeds(self):
        assert evaluate(GreedyPolicy(), PointReachEnv(), n_episodes=20, seed=0) == 1.0

    def test_untrained_policy_rarely_pushes(self):
        env = PlanarPushEnv()
        agent = make_agent(env)
        assert evaluate(agent, env, n_episodes=100, seed=0) <= 0.2

    def test_single_success_counts(self):
        assert evaluate(GreedyPolicy(), PointReachEnv(), n_episodes=1, seed=3) == 1.0


class TestTrain:
    """Collection loop."""

    def test_zero_steps(self):
        env = PointReachEnv()
        agent = make_agent(env)
        before = agent.parameter_vector()
        tracker = RecordingTracker()
        train(agent, env, total_steps=0, tracker=tracker)
        np.testing.assert_array_equal(agent.parameter_vector(), before)
        assert tracker.points == [("success_rate", tracker.points[0][1], 0)]
        assert tracker.flushed == 1

    def test_metrics_logged_with_increasing_steps(self):
        env = PointReachEnv()
        tracker = RecordingTracker()
        train(make_agent(env, weight_critic_var=0.5), env, total_steps=200, tracker=tracker)
        names = {name for name, _, _ in tracker.points}
        assert names == set(METRIC_NAMES)
        for metric in names:
            steps = [s for n, _, s in tracker.points if n == metric]
            assert steps == sorted(set(steps))
        assert [s for n, _, s in tracker.points if n == "success_rate"] == [0, 100, 200]

    def test_same_seed_same_history(self):
        histories = []
        for _ in range(2):
            env = PlanarPushEnv()
            tracker = RecordingTracker()
            train(make_agent(env, weight_critic_var=0.75, n_critics=3, seed=4), env,
                  total_steps=250, tracker=tracker)
            histories.append(tracker.points)
        assert histories[0] == histories[1]

    def test_eta_zero_trajectory_bit_identical(self):
        """2000 steps with weight 0 equal the run with the intrinsic branch off."""
        vectors = []
        for use_intrinsic in (True, False):
            env = PointReachEnv()
            agent = make_agent(env, weight_critic_var=0.0, use_intrinsic=use_intrinsic, seed=7)
            train(agent, env, total_steps=2000)
            vectors.append(agent.parameter_vector())
        np.testing.assert_array_equal(vectors[0], vectors[1])

    def test_live_channel_does_not_change_training(self):
        vectors = []
        for with_channel in (False, True):
            env = PlanarPushEnv()
            agent = make_agent(env, weight_critic_var=0.5, seed=2)
            channel = MetricChannel(capacity=8, policy=DropPolicy.DROP_OLDEST) if with_channel else None
            train(agent, env, total_steps=300, live_channel=channel)
            vectors.append(agent.parameter_vector())
            if channel is not None:
                assert channel.dropped == 300 - 8
                frames = channel.drain()
                assert frames[-1].step == 300
                assert "q_variance" in frames[-1].metrics
        np.testing.assert_array_equal(vectors[0], vectors[1])


@pytest.mark.slow
class TestCriticDisagreementAtFall:
    """Ensemble disagreement peaks when the block leaves the platform."""

    def test_variance_at_exit_step_exceeds_episode_median(self):
        env = PlanarPushEnv()
        agent = make_agent(env, hidden_sizes=[64, 64], batch_size=64, learning_starts=1000,
                           buffer_size=100_000, eval_freq=2000, weight_critic_var=0.5,
                           n_critics=4, seed=0)
        train(agent, env, total_steps=10_000)

        env.reset(seed=123)
        env.agent = np.array([0.1, 0.5])
        env.block = np.array([0.7, 0.5])
        env.goal = np.array([0.3, 0.3])
        push_right = np.array([1.0, 0.0])

        variances, exit_step = [], None
        for step in range(25):
            result = env.step(push_right)
            variances.append(agent.q_variance(result.obs.flatten(), push_right))
            if exit_step is None and env.fallen:
                exit_step = step
        assert exit_step is not None and exit_step < 20
        assert variances[exit_step] > float(np.median(variances))
