"""
Command-line entry point; exit codes: 0 ok, 1 usage, 2 data, 3 check failure
"""
import sys
from typing import List, Optional

from structlog import get_logger

from config.config import Config, get_config, validate_config
from . import __version__, configure_logging
from .commands.common import ArgumentParser
from .errors import HopSamplerError, UsageError

logger = get_logger()


def create_parser(config: Config) -> ArgumentParser:
    parser = ArgumentParser(prog="hopsampler",
                            description="Coordinated k-hop neighborhood sampling for discrete node embeddings")
    parser.add_argument("--version", action="version", version=f"hopsampler {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    # Register subcommands
    from .commands import check, embed, featuremap, linkpred, oracle, replay, stats

    for command in (embed, featuremap, check, linkpred, oracle, stats, replay):
        command.register(subparsers, config)
    return parser


def run(argv: List[str], config: Config) -> int:
    """Parse and dispatch; domain errors propagate to the caller"""
    args = create_parser(config).parse_args(argv)
    return args.handler(args, config, list(argv))


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    config = get_config()
    configure_logging(config.LOG_LEVEL)
    try:
        try:
            validate_config(config)
        except ValueError as e:
            raise UsageError(str(e)) from None
        return run(argv, config)
    except HopSamplerError as e:
        logger.error("Command failed", command=argv[0] if argv else None, error=str(e))
        print(f"hopsampler: {e}", file=sys.stderr)
        return e.exit_code
