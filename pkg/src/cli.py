"""Command line entry point: ``python -m src <command> [inputs] [options]``"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .exceptions import BasePolymeanException
from .file_storage import TrackStorage
from .models import ErrorModel, RunConfig, RunStatus
from .service import command_for
from .utils import settings_lib

logger = logging.getLogger(__name__)

__all__ = ["build_parser", "run", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polymean",
        description="Fréchet distances, optimal polyline simplification and p-mean curves of trajectories.",
    )
    return RunConfig.add_arguments(parser)


def _report(error: ErrorModel) -> int:
    print(error.json(), file=sys.stderr)
    return error.exit_code


def run(config: RunConfig) -> int:
    """Runs one command and writes its summary

    Args:
        config (RunConfig): validated run configuration

    Returns:
        int: 0 when every self-check passed, 2 on a failed bi-criteria run, 1 otherwise
    """
    try:
        summary = command_for(config).run()
    except BasePolymeanException as exc:
        logger.debug("command failed", exc_info=True)
        return _report(ErrorModel(message=exc.message, details=type(exc).__name__, exit_code=exc.exit_code))
    except ValueError as exc:
        return _report(ErrorModel(message=str(exc), details=type(exc).__name__))
    print(TrackStorage().write_summary(summary, config.summary))
    return 0 if summary.status == RunStatus.SUCCESS else 1


def main(argv: Optional[List[str]] = None) -> int:
    namespace = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_arguments(namespace)
    except ValidationError as exc:
        return _report(ErrorModel(message="invalid configuration", details=exc.errors()))
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else settings_lib.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return run(config)
