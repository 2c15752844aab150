"""One tracked training run from a resolved config tree."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from ..algorithms.registry import build_agent
from ..algorithms.sac_var import SacVarAgent
from ..algorithms.training import FrameSink, train
from ..config.tree import ConfigTree
from ..envs.registry import make_env
from ..livemetrics.channel import StreamFileWriter
from ..track.file_store import FileTracker

logger = logging.getLogger(__name__)

STREAM_ARTIFACT = "live_stream.ndjson"
CHECKPOINT_ARTIFACT = "checkpoint"


@dataclass
class RunResult:
    success_rate: float
    run_id: Optional[str] = None
    path: Optional[Path] = None
    agent: Optional[SacVarAgent] = None


def experiment_name_for(tree: ConfigTree) -> str:
    return f"{tree.get('algorithm.name')}_{tree.get('env')}"


def run_experiment(
    tree: ConfigTree,
    tracker: Optional[FileTracker] = None,
    experiment_name: Optional[str] = None,
    run_name: Optional[str] = None,
    save_checkpoint: bool = False,
    live_channel: Optional[FrameSink] = None,
    prepare_agent: Optional[Callable[[SacVarAgent], None]] = None,
) -> RunResult:
    """Build env and agent from ``tree`` and train, tracked when ``tracker`` is given.

    ``prepare_agent`` is called on the fresh agent before training starts.
    """
    env = make_env(tree.get("env"))
    agent = build_agent(tree.get("algorithm"), env.spec)
    if prepare_agent is not None:
        prepare_agent(agent)

    if tracker is None:
        success_rate = train(agent, env, live_channel=live_channel)
        return RunResult(success_rate=success_rate, agent=agent)

    run = tracker.start_run(experiment_name or experiment_name_for(tree), tree, run_name)
    with run:
        writer = None
        if agent.config.record_stream:
            writer = StreamFileWriter(run.artifacts_dir / STREAM_ARTIFACT)
        try:
            success_rate = train(agent, env, tracker=run, live_channel=live_channel,
                                 stream_writer=writer)
        finally:
            if writer is not None:
                writer.close()
        if save_checkpoint:
            agent.save(run.artifacts_dir / CHECKPOINT_ARTIFACT)
    logger.info("Run %s finished: success_rate=%.3f", run.run_id, success_rate)
    return RunResult(success_rate=success_rate, run_id=run.run_id, path=run.path, agent=agent)
