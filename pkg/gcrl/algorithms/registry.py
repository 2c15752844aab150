"""Algorithm lookup by name and agent construction from a resolved config."""

from typing import Any, Mapping

from natsort import natsorted

from ..envs.base import EnvSpec
from ..exceptions import UnknownComponentError
from .sac_var import SacVarAgent, SacVarConfig

# both names train the same learner; they differ in their default config files
ALGORITHMS = {
    "sac": SacVarAgent,
    "sac_var": SacVarAgent,
}


def build_agent(algorithm_tree: Mapping[str, Any], env_spec: EnvSpec) -> SacVarAgent:
    config = SacVarConfig.from_tree(algorithm_tree)
    if config.name not in ALGORITHMS:
        raise UnknownComponentError("algorithm", config.name, natsorted(ALGORITHMS))
    return ALGORITHMS[config.name](config, env_spec)
