import json

import pytest
import yaml
from click.testing import CliRunner

from gcrl.cli import cli
from gcrl.cli.sweep import JOURNAL_FILE, study_directory
from gcrl.track import FileTracker, RunStatus

STUDY = """
env: PointReach-v0
algorithm: sac_var
overrides:
  - algorithm.total_steps=100
  - algorithm.learning_starts=50
  - algorithm.hidden_sizes=[8]
  - algorithm.batch_size=8
  - algorithm.n_eval_episodes=1
hydra:
  sweeper:
    study_name: cli_study
    max_trials: 2
    search_space:
      ++algorithm.weight_critic_var:
        choices: [0.0, 0.5]
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner, tiny_tokens):
    def call(*args, tiny=False):
        args = list(args)
        if tiny:
            args += tiny_tokens
        return runner.invoke(cli, args, catch_exceptions=False)

    return call


def run_id_from(output):
    for line in output.splitlines():
        if line.startswith("run_id: "):
            return line.split(": ", 1)[1]
    raise AssertionError(output)


class TestRunCommand:
    def test_train(self, invoke, tracker):
        result = invoke("run", "algorithm.total_steps=200", "++algorithm.weight_critic_var=0.75", tiny=True)
        assert result.exit_code == 0, result.output
        run_id = run_id_from(result.output)
        assert "success_rate: " in result.output
        info = tracker.find_run(run_id)
        assert info.status is RunStatus.FINISHED
        config = yaml.safe_load((info.path / "artifacts" / "config.yaml").read_text())
        assert config["algorithm"]["weight_critic_var"] == 0.75
        assert (info.path / "artifacts" / "checkpoint" / "agent.yaml").exists()

    def test_no_checkpoint(self, invoke, tracker):
        result = invoke("run", "--no-save-checkpoint", "algorithm.total_steps=100", tiny=True)
        info = tracker.find_run(run_id_from(result.output))
        assert not (info.path / "artifacts" / "checkpoint").exists()

    def test_unknown_algorithm(self, invoke):
        result = invoke("run", "algorithm=td3")
        assert result.exit_code == 2
        assert "Valid choices: sac, sac_var" in result.output

    def test_replace_of_missing_key(self, invoke):
        result = invoke("run", "algorithm.weight_critic_var=0.5")
        assert result.exit_code == 2
        assert "++algorithm.weight_critic_var" in result.output

    def test_numeric_failure(self, invoke, tracker):
        result = invoke("run", "algorithm.total_steps=200", "algorithm.learning_rate=inf", tiny=True)
        assert result.exit_code == 3
        (run,) = tracker.list_runs()
        assert run.status is RunStatus.FAILED

    def test_buffer_smaller_than_episode(self, invoke, tracker):
        result = invoke("run", "env=PlanarPush-v0", "algorithm.buffer_size=60",
                        "algorithm.total_steps=150")
        assert result.exit_code == 2
        assert "smaller than one episode" in result.output
        assert tracker.list_runs() == []

    def test_live_rejects_unknown_metric(self, invoke):
        result = invoke("run", "--live", "--metrics", "reward", "algorithm.total_steps=10", tiny=True)
        assert result.exit_code == 2
        assert "q_variance" in result.output

    def test_custom_config_dir(self, invoke, tmp_path):
        algorithm_dir = tmp_path / "conf" / "algorithm"
        algorithm_dir.mkdir(parents=True)
        (algorithm_dir / "toy.yaml").write_text(
            "name: sac\nuse_intrinsic: false\nhidden_sizes: [8]\nbatch_size: 8\n"
            "learning_starts: 20\ntotal_steps: 60\neval_freq: 60\nn_eval_episodes: 1\n"
        )
        result = invoke("--config-dir", str(tmp_path / "conf"), "run", "algorithm=toy")
        assert result.exit_code == 0, result.output


class TestViewAndRuns:
    @pytest.fixture
    def recorded(self, invoke):
        result = invoke("run", "algorithm.total_steps=120", "algorithm.record_stream=true", tiny=True)
        assert result.exit_code == 0, result.output
        return run_id_from(result.output)

    def test_snapshot(self, invoke, recorded):
        result = invoke("view", recorded, "--snapshot", "--metrics", "q_variance,success_rate")
        assert result.exit_code == 0, result.output
        assert "step 120" in result.output
        assert "q_variance" in result.output

    def test_unknown_metric(self, invoke, recorded):
        result = invoke("view", recorded, "--snapshot", "--metrics", "reward")
        assert result.exit_code == 2
        assert "Available: " in result.output

    def test_stream_file_target(self, invoke, recorded, tracker):
        path = tracker.find_run(recorded).path / "artifacts" / "live_stream.ndjson"
        result = invoke("view", str(path), "--snapshot")
        assert result.exit_code == 0
        assert "critic_loss" in result.output

    def test_missing_run(self, invoke):
        assert invoke("view", "0123abcd", "--snapshot").exit_code == 4

    def test_run_without_stream(self, invoke):
        result = invoke("run", "algorithm.total_steps=60", tiny=True)
        view = invoke("view", run_id_from(result.output), "--snapshot")
        assert view.exit_code == 4
        assert "record_stream" in view.output

    def test_runs_list(self, invoke, recorded):
        result = invoke("runs", "list")
        assert result.exit_code == 0
        assert recorded in result.output
        assert "FINISHED" in result.output

    def test_runs_list_empty(self, invoke):
        assert "No runs under" in invoke("runs", "list").output


class TestSweepCommand:
    @pytest.fixture
    def study_file(self, tmp_path):
        path = tmp_path / "cli_study.yaml"
        path.write_text(STUDY)
        return path

    def test_study(self, invoke, study_file, tmp_path):
        result = invoke("sweep", str(study_file))
        assert result.exit_code == 0, result.output
        assert "repeat-and-prune" in result.output
        directory = study_directory(tmp_path / "mlruns", "cli_study")
        report = json.loads((directory / "report.json").read_text())
        assert [c["n_trials"] for c in report["configurations"]] == [1, 1]
        assert len(FileTracker(tmp_path / "mlruns").list_runs("cli_study")) == 2
        assert len((directory / JOURNAL_FILE).read_text().splitlines()) == 5

    def test_existing_journal_needs_resume(self, invoke, study_file):
        invoke("sweep", str(study_file))
        result = invoke("sweep", str(study_file))
        assert result.exit_code == 4
        assert "--resume" in result.output

    def test_resume(self, invoke, study_file):
        invoke("sweep", str(study_file))
        result = invoke("sweep", str(study_file), "--resume")
        assert result.exit_code == 0, result.output
        assert "Resuming cli_study: 2 trials journaled, 0 interrupted" in result.output

    def test_unknown_study(self, invoke):
        result = invoke("sweep", "no_such_study")
        assert result.exit_code == 4
        assert "sac_var_PlanarPush" in result.output


class TestMisc:
    def test_version(self, invoke):
        assert invoke("version").output.startswith("gcrl v")

    def test_help_lists_exit_codes(self, invoke):
        assert "2 configuration error" in invoke("--help").output

    def test_perf_threshold_miss(self, invoke):
        result = invoke("test", "perf", "--total-steps", "100", "algorithm.n_eval_episodes=2")
        assert result.exit_code == 1
        assert "FAIL sac on PointReach-v0" in result.output

    def test_plot(self, invoke, tmp_path):
        invoke("run", "algorithm.total_steps=100", "++algorithm.weight_critic_var=0.5", tiny=True)
        output = tmp_path / "curves.png"
        result = invoke("plot", "curves", "--experiment", "sac_var_PointReach-v0", "--save",
                        "--output", str(output))
        assert result.exit_code == 0, result.output
        assert output.exists()
        assert "0.5" in result.output

    @pytest.mark.integration
    def test_smoke(self, invoke):
        result = invoke("test", "smoke", "--algorithm", "sac_var", "--env", "PointReach-v0")
        assert result.exit_code == 0, result.output
        assert "All 1 combinations passed" in result.output

    @pytest.mark.integration
    def test_smoke_unknown_env_fails(self, invoke):
        result = invoke("test", "smoke", "--algorithm", "sac", "--env", "Ant-v4")
        assert result.exit_code == 1
