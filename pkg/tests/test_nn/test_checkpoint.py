import numpy as np
import pytest

from gcrl.exceptions import ConfigParseError
from gcrl.nn import AdamState, Mlp, OutputActivation, adam_step, load_adam, load_mlp, save_adam, save_mlp


class TestCheckpoint:
    """Network and optimizer files."""

    def test_mlp_file(self, tmp_path, rng):
        net = Mlp([5, 7, 4], output_activation=OutputActivation.TANH_GAUSSIAN_HEAD, rng=rng)
        path = save_mlp(net, tmp_path / "actor.mlp")
        assert path.read_bytes().startswith(b"gcrl-mlp v1\n")
        loaded = load_mlp(path)
        assert loaded.layer_sizes == [5, 7, 4]
        assert loaded.output_activation is OutputActivation.TANH_GAUSSIAN_HEAD
        np.testing.assert_array_equal(loaded.params, net.params)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "broken.mlp"
        path.write_bytes(b"something else\n")
        with pytest.raises(ConfigParseError):
            load_mlp(path)

    def test_truncated_parameters(self, tmp_path, rng):
        path = save_mlp(Mlp([3, 3], rng=rng), tmp_path / "net.mlp")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ConfigParseError):
            load_mlp(path)

    def test_adam_state(self, tmp_path, rng):
        state = AdamState.zeros(6, lr=1e-3)
        adam_step(state, np.zeros(6), rng.normal(size=6))
        loaded = load_adam(save_adam(state, tmp_path / "optim.npz"))
        assert loaded.step == 1
        assert loaded.lr == 1e-3
        np.testing.assert_array_equal(loaded.m, state.m)
        np.testing.assert_array_equal(loaded.v, state.v)
