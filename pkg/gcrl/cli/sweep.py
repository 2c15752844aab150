"""Hyperparameter study commands."""

from pathlib import Path
from typing import Optional, Tuple, Union

import click

from ..exceptions import StateError
from ..sweep.launcher import TrainingLauncher
from ..sweep.loader import load_study_file
from ..sweep.runner import run_study
from ..sweep.study import StudyState, mark_interrupted
from .utils import get_tracker, handle_error

STUDIES_DIR = "studies"
JOURNAL_FILE = "journal.ndjson"


def study_directory(track_root: Union[str, Path], study_name: str) -> Path:
    return Path(track_root) / STUDIES_DIR / study_name


@click.command(name="sweep")
@click.argument("study")
@click.argument("overrides", nargs=-1)
@click.option("--resume", is_flag=True, help="Continue the study from its journal")
@click.option("--n-jobs", type=int, help="Override the study's parallel trial count")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for trial seeds")
@click.pass_context
def sweep_command(ctx: click.Context, study: str, overrides: Tuple[str, ...], resume: bool,
                  n_jobs: Optional[int], seed: int) -> None:
    """Run a study from a file or a shipped name (conf/sweep/<name>.yaml).

    Extra OVERRIDES apply to every trial. The journal and report are written
    to <track-root>/studies/<study_name>/.
    """
    debug = ctx.obj.get("DEBUG", False)
    try:
        definition = load_study_file(study)
        if n_jobs is not None:
            definition.config.n_jobs = n_jobs
        config = definition.config
        directory = study_directory(ctx.obj["TRACK_ROOT"], config.study_name)
        journal = directory / JOURNAL_FILE

        state = None
        if resume:
            state = StudyState.load(journal)
            state.config.n_jobs = config.n_jobs
            interrupted = mark_interrupted(state)
            click.echo(f"Resuming {config.study_name}: {len(state.trials)} trials journaled, "
                       f"{interrupted} interrupted")
        elif journal.exists():
            raise StateError(f"Journal {journal} exists; pass --resume to continue it")

        tracker = get_tracker(ctx)
        # created once here so concurrent workers never race on it
        tracker.get_or_create_experiment(config.study_name)
        launcher = TrainingLauncher(
            base_tokens=definition.base_tokens + list(overrides),
            track_root=tracker.root,
            experiment_name=config.study_name,
            objective_metric=config.objective_metric,
            objective_mode=config.objective_mode,
            direction=config.direction,
            config_dir=ctx.obj.get("CONFIG_DIR"),
        )
        state_config = state.config if state is not None else config
        report = run_study(state_config, definition.space if state is None else state.space,
                           launcher, journal_path=journal, seed=seed, state=state)
        report.save(directory)
    except Exception as e:
        ctx.exit(handle_error(e, debug, "sweep"))

    click.echo(report.to_table())
    click.echo(f"\nJournal and report: {directory}")
