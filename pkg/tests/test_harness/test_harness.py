import numpy as np
import pytest

from gcrl.algorithms import SacVarAgent
from gcrl.exceptions import NumericError
from gcrl.harness import (
    CHECKPOINT_ARTIFACT,
    STREAM_ARTIFACT,
    PerfReport,
    SmokeReport,
    experiment_name_for,
    run_experiment,
    run_perf,
    run_smoke,
    run_smoke_case,
)
from gcrl.livemetrics import read_stream_file
from gcrl.track import RunStatus


def poison_critic(agent):
    agent.ensemble.critics[0].params[:] = np.nan


class TestRunExperiment:
    def test_untracked(self, tiny_tree):
        result = run_experiment(tiny_tree())
        assert result.run_id is None
        assert 0.0 <= result.success_rate <= 1.0
        assert result.agent.n_updates > 0

    def test_experiment_name(self, tiny_tree):
        assert experiment_name_for(tiny_tree("env=PlanarPush-v0")) == "sac_var_PlanarPush-v0"

    def test_tracked_run_artifacts(self, tiny_tree, tracker):
        tree = tiny_tree("++algorithm.weight_critic_var=0.5", "algorithm.record_stream=true")
        result = run_experiment(tree, tracker, save_checkpoint=True)
        info = tracker.find_run(result.run_id)
        assert info.status is RunStatus.FINISHED
        assert tracker.read_params(result.run_id)["algorithm.weight_critic_var"] == "0.5"
        assert tracker.get_experiment("sac_var_PointReach-v0").experiment_id == info.experiment_id

        history = tracker.read_history(result.run_id, "success_rate")
        assert history[-1].value == result.success_rate
        assert [p.step for p in history] == [0, 100, 200]

        frames = read_stream_file(result.path / "artifacts" / STREAM_ARTIFACT)
        assert [f.step for f in frames] == list(range(1, 201))

        restored = SacVarAgent.load(result.path / "artifacts" / CHECKPOINT_ARTIFACT)
        np.testing.assert_array_equal(restored.parameter_vector(), result.agent.parameter_vector())
        assert restored.config.weight_critic_var == 0.5

    def test_failure_marks_run_failed(self, tiny_tree, tracker):
        with pytest.raises(NumericError):
            run_experiment(tiny_tree(), tracker, run_name="broken", prepare_agent=poison_critic)
        (run,) = tracker.list_runs()
        assert run.status is RunStatus.FAILED
        assert run.run_name == "broken"


class TestSmoke:
    def test_single_case(self):
        case = run_smoke_case("sac_var", "PlanarPush-v0")
        assert case.passed, case.message
        assert case.kind == "ok"

    def test_numeric_fault_reported(self):
        case = run_smoke_case("sac", "PointReach-v0", prepare_agent=poison_critic)
        assert not case.passed
        assert case.kind == "numeric"

    def test_unknown_algorithm_is_an_error_case(self):
        case = run_smoke_case("td3", "PointReach-v0")
        assert case.kind == "error"
        assert "UnknownComponentError" in case.message

    @pytest.mark.integration
    def test_all_combinations(self):
        report = run_smoke()
        assert [(c.algorithm, c.env) for c in report.cases] == [
            ("sac", "PlanarPush-v0"), ("sac", "PointReach-v0"),
            ("sac_var", "PlanarPush-v0"), ("sac_var", "PointReach-v0"),
        ]
        assert report.passed
        assert list(report.to_frame().columns) == ["algorithm", "env", "passed", "seconds", "kind", "message"]

    def test_empty_report_fails(self):
        assert not SmokeReport().passed


class TestPerfReport:
    def test_median_threshold(self):
        report = PerfReport("sac", "PointReach-v0", 0.9, [0, 1, 2], [1.0, 0.9, 0.2])
        assert report.median == 0.9
        assert report.passed
        assert report.describe().startswith("PASS sac on PointReach-v0: median success_rate 0.900")

    def test_below_threshold(self):
        report = PerfReport("sac", "PointReach-v0", 0.9, [0, 1, 2], [0.95, 0.5, 0.85])
        assert not report.passed
        assert "seed 1: 0.500" in report.describe()

    def test_short_run_is_tracked(self, tracker):
        report = run_perf(overrides=["algorithm.learning_starts=50", "algorithm.hidden_sizes=[16, 16]",
                                     "algorithm.n_eval_episodes=2"],
                          tracker=tracker, total_steps=100)
        assert report.seeds == [0, 1, 2]
        assert len(report.success_rates) == 3
        assert sorted(r.run_name for r in tracker.list_runs("perf")) == ["perf-seed-0", "perf-seed-1", "perf-seed-2"]


@pytest.mark.slow
class TestPerformanceGate:
    def test_sac_solves_point_reach(self):
        report = run_perf()
        assert report.passed, report.describe()

    def test_gate_catches_myopic_critic(self):
        report = run_perf(overrides=["algorithm.gamma=0"], total_steps=10_000)
        assert not report.passed, report.describe()
