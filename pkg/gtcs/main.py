import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from gtcs import __version__
from gtcs.cli.commands import design, plate, sim, tables
from gtcs.core.config import settings
from gtcs.core.errors import EXIT_INTERNAL, EXIT_USAGE, GTCSError
from gtcs.core.logging import LOG_LEVELS, configure_logging

logger = logging.getLogger(__name__)

# Command groups, registered in help order
COMMANDS = (design, sim, plate, tables)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtcs",
        description=f"{settings.PROJECT_NAME}: pooled-test designs, decoding and success-rate sweeps",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", type=str.upper, default=None, choices=LOG_LEVELS,
                        help="Override GTCS_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command, return its exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        0 on success, 2 on usage or input errors, 1 on internal errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        configure_logging(args.log_level or settings.LOG_LEVEL)
        return args.func(args)
    except GTCSError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception("event=command_failed command=%s", args.command)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
