"""
`hopsampler replay`: re-run a recorded command and confirm its outputs are unchanged
"""
import argparse
import os
from contextlib import contextmanager
from typing import Iterator, List

from structlog import get_logger

from config.config import Config
from ..errors import DataError
from ..services.manifest import RunManifest, verify_inputs, verify_outputs

logger = get_logger()


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("replay", help="re-run the command recorded in a manifest")
    parser.add_argument("manifest", help="manifest file written next to an output")
    parser.set_defaults(handler=run_replay)


@contextmanager
def _working_directory(path: str) -> Iterator[None]:
    previous = os.getcwd()
    try:
        os.chdir(path)
    except OSError as e:
        raise DataError(f"recorded working directory unavailable: {path} ({e.strerror})") from None
    try:
        yield
    finally:
        os.chdir(previous)


def run_replay(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    from ..cli import run

    manifest = RunManifest.read(args.manifest)
    if manifest.command == "replay":
        raise DataError("a replay manifest cannot be replayed")
    verify_inputs(manifest)
    logger.info("Replaying run", command=manifest.command, argv=manifest.argv)

    with _working_directory(manifest.workdir):
        code = run(manifest.argv, config)
        if code == 0:
            verify_outputs(manifest)
    return code
