"""Shared plumbing for the toolkit commands.

Every command accepts ``--config``, ``--seed`` and ``--out``; errors leave
the process with 1 (usage/config), 2 (data) or 3 (numeric failure).
"""
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from connectome import DataError
from graphcore import GraphError
from hemon import ConfigError, NumericError
from influence import InfluenceError
from pipeline import RunConfig, StageError, load_run_config
from pipeline.runner import SYNTH_DIR
from pipeline.synth import STIMULI_FEATURES, STIMULI_RATINGS
from trunks import HierarchyError

from api.models import PipelineRun, TrainingRun


logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

_DATA_ERRORS = (DataError, GraphError, HierarchyError, InfluenceError, FileNotFoundError, ValueError)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, StageError) and exc.cause is not None:
        return exit_code_for(exc.cause)
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    return EXIT_DATA


class HemonCommand(BaseCommand):
    """Base for commands that run on a ``RunConfig``.

    Subclasses implement ``add_command_arguments``, ``config_overrides`` and
    ``run``. Commands with ``records_run`` log a ``PipelineRun`` row.
    """

    records_run = False

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        fallback = parser.error

        def error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                sys.stderr.write(f"{prog_name} {subcommand}: error: {message}\n")
                sys.exit(EXIT_USAGE)
            fallback(message)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', type=Path, help='TOML run configuration')
        parser.add_argument('--seed', type=int, help='Run seed (non-negative)')
        parser.add_argument('--out', type=Path, help='Output directory for artifacts')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def config_overrides(self, options: Dict[str, Any]) -> Dict[str, Any]:
        return {}

    def run(self, config: RunConfig, options: Dict[str, Any]) -> Optional[str]:
        """Do the work; may return the sha256 digest of the inputs."""
        raise NotImplementedError

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def load_config(self, options: Dict[str, Any]) -> RunConfig:
        if options.get("seed") is not None and options["seed"] < 0:
            raise CommandError("--seed must be non-negative", returncode=EXIT_USAGE)
        overrides = dict(self.config_overrides(options))
        overrides["seed"] = options.get("seed")
        overrides["out"] = options.get("out")
        try:
            config = load_run_config(options.get("config"), **overrides)
            if "seed" not in config.model_fields_set:
                overrides["seed"] = settings.HEMON_DEFAULT_SEED
                config = load_run_config(options.get("config"), **overrides)
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except FileNotFoundError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        if "out" not in config.model_fields_set:
            config = config.model_copy(update={"out": Path(settings.HEMON_ARTIFACT_ROOT)})
        return config

    def handle(self, *args, **options):
        config = self.load_config(options)
        self.pipeline_run = None
        if self.records_run:
            self.pipeline_run = PipelineRun.objects.create(
                command=self.command_name,
                seed=config.seed,
                out_dir=str(config.out),
                config=config.model_dump(mode="json"),
            )
        try:
            digest = self.run(config, options)
        except (StageError, ConfigError, NumericError) + _DATA_ERRORS as exc:
            self._fail(exc)
            raise CommandError(str(exc), returncode=exit_code_for(exc)) from exc
        if self.pipeline_run is not None:
            self.pipeline_run.status = "success"
            self.pipeline_run.input_digest = digest or ""
            self.pipeline_run.save(update_fields=["status", "input_digest", "updated_at"])

    def _fail(self, exc: BaseException) -> None:
        logger.error("%s failed: %s", self.command_name, exc)
        self.stdout.write(self.style.ERROR(f'❌ {self.command_name} failed: {exc}'))
        if self.pipeline_run is None:
            return
        self.pipeline_run.status = "failed"
        self.pipeline_run.error = str(exc)
        if isinstance(exc, StageError):
            self.pipeline_run.stage = exc.stage
            self.pipeline_run.input_digest = exc.digest
        self.pipeline_run.save(update_fields=["status", "error", "stage", "input_digest", "updated_at"])

    def record_training(self, **fields) -> TrainingRun:
        return TrainingRun.objects.create(run=self.pipeline_run, **fields)

    # Default artifact locations

    def artifact(self, config: RunConfig, name: str, given: Optional[Path] = None) -> Path:
        return Path(given) if given is not None else Path(config.out) / name

    def stimuli_paths(self, config: RunConfig, options: Dict[str, Any]):
        features = options.get("features") or config.stimuli_features or Path(config.out) / SYNTH_DIR / STIMULI_FEATURES
        ratings = options.get("ratings") or config.stimuli_ratings or Path(config.out) / SYNTH_DIR / STIMULI_RATINGS
        return Path(features), Path(ratings)
