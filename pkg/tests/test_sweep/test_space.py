import numpy as np
import pytest

from gcrl.exceptions import ConfigError
from gcrl.sweep import SearchEntry, SearchSpace


class TestSearchEntry:
    def test_categorical(self):
        entry = SearchEntry.from_mapping("++algorithm.weight_critic_var", {"type": "categorical", "choices": [0.0, 0.5]})
        assert entry.choices == (0.0, 0.5)

    def test_type_defaults_to_categorical(self):
        assert SearchEntry.from_mapping("algorithm.n_critics", {"choices": [2, 4]}).choices == (2, 4)

    def test_uniform_grid(self):
        entry = SearchEntry.from_mapping("algorithm.tau", {"type": "uniform", "low": 0.0, "high": 1.0, "n_points": 5})
        np.testing.assert_allclose(entry.choices, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_loguniform_grid(self):
        entry = SearchEntry.from_mapping("algorithm.learning_rate",
                                         {"type": "loguniform", "low": 1e-4, "high": 1e-2, "n_points": 3})
        np.testing.assert_allclose(entry.choices, [1e-4, 1e-3, 1e-2])

    @pytest.mark.parametrize(
        "spec",
        [
            {"choices": []},
            {"type": "loguniform", "low": 0.0, "high": 1.0, "n_points": 3},
            {"type": "uniform", "low": 1.0, "high": 0.0, "n_points": 3},
            {"type": "uniform", "low": 0.0, "high": 1.0},
            {"type": "normal", "choices": [1]},
        ],
    )
    def test_invalid(self, spec):
        with pytest.raises(ConfigError):
            SearchEntry.from_mapping("algorithm.tau", spec)

    def test_invalid_key(self):
        with pytest.raises(ConfigError):
            SearchEntry.from_mapping("algorithm tau", {"choices": [1]})


class TestSearchSpace:
    @pytest.fixture
    def space(self):
        return SearchSpace.from_mapping({
            "algorithm.n_critics": {"choices": [2, 4]},
            "++algorithm.weight_critic_var": {"choices": [0.0, 0.5, 1.0]},
        })

    def test_product_order(self, space):
        assert len(space) == 6
        assert space[0] == {"algorithm.n_critics": 2, "++algorithm.weight_critic_var": 0.0}
        assert space[1] == {"algorithm.n_critics": 2, "++algorithm.weight_critic_var": 0.5}
        assert space[3] == {"algorithm.n_critics": 4, "++algorithm.weight_critic_var": 0.0}

    def test_index_of(self, space):
        for i, params in enumerate(space.configurations()):
            assert space.index_of(params) == i

    def test_tokens(self, space):
        assert SearchSpace.to_tokens(space[5]) == ["algorithm.n_critics=4", "++algorithm.weight_critic_var=1.0"]

    def test_describe_hides_add_prefix(self, space):
        assert SearchSpace.describe(space[1]) == "algorithm.n_critics=2, algorithm.weight_critic_var=0.5"

    def test_mapping_round_trip(self, space):
        assert SearchSpace.from_mapping(space.to_mapping()).configurations() == space.configurations()

    def test_empty(self):
        with pytest.raises(ConfigError):
            SearchSpace.from_mapping({})
