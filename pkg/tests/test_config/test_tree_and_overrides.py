import pytest

from gcrl.config import ConfigTree, apply_overrides, coerce_literal, deep_merge, parse_override, parse_overrides
from gcrl.config.overrides import OverrideMode, format_literal
from gcrl.exceptions import ConfigError, DuplicateKeyError, UnknownKeyError


@pytest.fixture
def tree():
    return ConfigTree({"algorithm": {"gamma": 0.98, "hidden_sizes": [64, 64], "use_her": True}, "env": "PointReach-v0"})


class TestConfigTree:
    def test_dot_access(self, tree):
        assert tree.get("algorithm.gamma") == 0.98
        assert tree.get("algorithm.missing", "fallback") == "fallback"
        assert tree.contains("env") and not tree.contains("env.name")

    def test_with_value_returns_new_tree(self, tree):
        updated = tree.with_value("algorithm.gamma", 0.5)
        assert updated.get("algorithm.gamma") == 0.5
        assert tree.get("algorithm.gamma") == 0.98

    def test_item_access_is_a_copy(self, tree):
        tree["algorithm"]["gamma"] = 0.0
        assert tree.get("algorithm.gamma") == 0.98

    def test_flatten(self, tree):
        assert tree.flatten() == {
            "algorithm.gamma": 0.98,
            "algorithm.hidden_sizes": [64, 64],
            "algorithm.use_her": True,
            "env": "PointReach-v0",
        }

    def test_yaml_round_trip_keeps_types(self, tree):
        assert ConfigTree.from_yaml(tree.to_yaml()) == tree

    def test_scientific_strings_become_floats(self):
        assert ConfigTree.from_yaml("lr: 1e-3\n").get("lr") == pytest.approx(1e-3)


class TestDeepMerge:
    def test_siblings_survive(self):
        merged = deep_merge({"a": {"x": 1, "y": 2}, "b": 3}, {"a": {"y": 5}})
        assert merged == {"a": {"x": 1, "y": 5}, "b": 3}

    def test_base_untouched(self):
        base = {"a": {"x": 1}}
        deep_merge(base, {"a": {"x": 2}})
        assert base == {"a": {"x": 1}}


class TestLiterals:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("true", True),
            ("False", False),
            ("null", None),
            ("42", 42),
            ("-3", -3),
            ("0.25", 0.25),
            ("1e-3", 1e-3),
            ("[64, 64]", [64, 64]),
            ("[]", []),
            ("'0.5'", "0.5"),
            ("PlanarPush-v0", "PlanarPush-v0"),
        ],
    )
    def test_coerce(self, text, expected):
        value = coerce_literal(text)
        assert value == expected
        assert type(value) is type(expected)

    @pytest.mark.parametrize("value", [True, None, 7, 0.1, [16, 32], "auto"])
    def test_format_inverts_coerce(self, value):
        assert coerce_literal(format_literal(value)) == value


class TestOverrides:
    def test_parse_modes(self):
        replace, add = parse_overrides(["algorithm.gamma=0.9", "++algorithm.weight_critic_var=0.5"])
        assert (replace.path, replace.value, replace.mode) == ("algorithm.gamma", 0.9, OverrideMode.REPLACE)
        assert (add.path, add.value, add.mode) == ("algorithm.weight_critic_var", 0.5, OverrideMode.ADD)
        assert add.to_token() == "++algorithm.weight_critic_var=0.5"

    @pytest.mark.parametrize("token", ["algorithm.gamma", "=1", "algorithm..gamma=1", "1abc=2"])
    def test_malformed(self, token):
        with pytest.raises(ConfigError):
            parse_override(token)

    def test_replace_existing(self, tree):
        out = apply_overrides(tree, parse_overrides(["algorithm.gamma=0.9"]))
        assert out.get("algorithm.gamma") == 0.9

    def test_replace_unknown_key(self, tree):
        with pytest.raises(UnknownKeyError, match=r"\+\+algorithm.weight_critic_var"):
            apply_overrides(tree, parse_overrides(["algorithm.weight_critic_var=0.5"]))

    def test_add_new_key(self, tree):
        out = apply_overrides(tree, parse_overrides(["++algorithm.weight_critic_var=0.5"]))
        assert out.get("algorithm.weight_critic_var") == 0.5

    def test_add_existing_key(self, tree):
        with pytest.raises(DuplicateKeyError):
            apply_overrides(tree, parse_overrides(["++algorithm.gamma=0.5"]))

    def test_left_to_right(self, tree):
        out = apply_overrides(tree, parse_overrides(["algorithm.gamma=0.1", "algorithm.gamma=0.2"]))
        assert out.get("algorithm.gamma") == 0.2
