import pytest
import yaml

from gcrl.exceptions import ConfigError, NotFoundError, UnknownKeyError
from gcrl.sweep import (
    TrainingLauncher,
    TrialRequest,
    find_study_file,
    load_study_file,
    parse_study,
    run_study,
)
from gcrl.track import FileTracker

FLAT_STUDY = """
env: PointReach-v0
study_name: flat
max_trials: 4
direction: minimize
search_space:
  algorithm.tau:
    choices: [0.01, 0.05]
"""

STUDY_WITH_PLUGIN_KEYS = """
env: PointReach-v0
hydra:
  sweeper:
    _target_: hydra_plugins.hydra_optuna_sweeper.optuna_sweeper.OptunaSweeper
    sampler:
      seed: 123
    storage: null
    max_trials: 4
    search_space:
      algorithm.tau:
        choices: [0.01, 0.05]
"""


class TestStudyFiles:
    def test_shipped_study(self):
        definition = load_study_file("sac_var_PlanarPush")
        assert definition.config.max_trials == 15
        assert definition.config.min_trials_per_param == 3
        assert definition.config.max_trials_per_param == 12
        assert len(definition.space) == 5
        assert definition.space.keys == ["++algorithm.weight_critic_var"]
        assert definition.base_tokens == ["algorithm=sac_var", "env=PlanarPush-v0", "algorithm.total_steps=20000"]

    def test_flat_shape(self, tmp_path):
        path = tmp_path / "flat.yaml"
        path.write_text(FLAT_STUDY)
        definition = load_study_file(path)
        assert definition.config.direction == "minimize"
        assert definition.base_tokens == ["env=PointReach-v0"]
        assert definition.path == path

    def test_name_defaults_to_file_stem(self):
        definition = parse_study(yaml.safe_load(FLAT_STUDY.replace("study_name: flat\n", "")), "mine")
        assert definition.config.study_name == "mine"

    @pytest.mark.parametrize(
        "data",
        [
            [1, 2],
            {"max_trials": 3},
            {"search_space": {"x": {"choices": [1]}}},
            {"hydra": {"sweeper": {"max_trials": 3, "search_space": {"x": {"choices": [1]}}, "n_trials": 2}}},
            {"max_trials": 3, "search_space": {"x": {"choices": [1]}}, "overrides": "a=1"},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(ConfigError):
            parse_study(data)

    def test_misspelled_key_is_rejected(self):
        """A typo must not silently fall back to a default budget."""
        data = {"max_trials": 3, "max_trial_per_param": 1, "search_space": {"x": {"choices": [1]}}}
        with pytest.raises(UnknownKeyError, match="max_trial_per_param"):
            parse_study(data)

    def test_unknown_top_level_key_in_hydra_shape(self):
        data = yaml.safe_load(STUDY_WITH_PLUGIN_KEYS)
        data["enviroment"] = "PointReach-v0"
        with pytest.raises(UnknownKeyError, match="enviroment"):
            parse_study(data)

    def test_hydra_plugin_keys_are_accepted(self):
        definition = parse_study(yaml.safe_load(STUDY_WITH_PLUGIN_KEYS))
        assert definition.config.max_trials == 4
        assert definition.base_tokens == ["env=PointReach-v0"]

    def test_missing_file(self):
        with pytest.raises(NotFoundError, match="sac_var_PlanarPush"):
            find_study_file("no_such_study")


class TestTrainingLauncher:
    def test_tokens(self, tmp_path):
        launcher = TrainingLauncher(["env=PlanarPush-v0"], tmp_path, "exp")
        request = TrialRequest(3, {"++algorithm.weight_critic_var": 0.5}, 42,
                               ["++algorithm.weight_critic_var=0.5"])
        assert launcher.tokens_for(request) == [
            "env=PlanarPush-v0", "++algorithm.weight_critic_var=0.5", "algorithm.seed=42",
        ]

    def test_tracked_trial(self, tmp_path, tiny_tokens):
        root = tmp_path / "mlruns"
        launcher = TrainingLauncher(tiny_tokens + ["algorithm.total_steps=200"], root, "exp")
        result = launcher(TrialRequest(0, {}, 5, ["++algorithm.weight_critic_var=0.25"]))
        assert 0.0 <= result.objective <= 1.0
        tracker = FileTracker(root)
        params = tracker.read_params(result.run_id)
        assert params["algorithm.seed"] == "5"
        assert params["algorithm.weight_critic_var"] == "0.25"
        assert tracker.find_run(result.run_id).run_name == "trial-0"

    def test_best_mode(self, tmp_path, tiny_tokens):
        root = tmp_path / "mlruns"
        launcher = TrainingLauncher(tiny_tokens + ["algorithm.total_steps=200"], root, "exp",
                                    objective_mode="best")
        result = launcher(TrialRequest(0, {}, 1, []))
        history = [p.value for p in FileTracker(root).read_history(result.run_id, "success_rate")]
        assert result.objective == max(history)


@pytest.mark.slow
class TestPlanarPushStudy:
    def test_reduced_study(self, tmp_path):
        definition = load_study_file("sac_var_PlanarPush")
        root = tmp_path / "mlruns"
        FileTracker(root).get_or_create_experiment("sweep")
        launcher = TrainingLauncher(definition.base_tokens + ["algorithm.total_steps=2000"], root, "sweep")
        report = run_study(definition.config, definition.space, launcher, tmp_path / "journal.ndjson")
        assert report.summary["n_trials"].tolist() == [3, 3, 3, 3, 3]
        assert report.best_index is not None
        assert len(FileTracker(root).list_runs("sweep")) == 15
