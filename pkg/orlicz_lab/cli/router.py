"""Sub-command registry and exit-code mapping."""
import argparse
import sys
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from orlicz_lab.cli.arguments import common_options
from orlicz_lab.cli.commands import decompose, ledger, norm, sweep, verify, wave
from orlicz_lab.cli.config_file import apply_config, read_config
from orlicz_lab.core.exceptions import OrliczLabError
from orlicz_lab.core.logging import configure_logging, get_logger
from orlicz_lab.schemas.run import RunConfig

logger = get_logger(__name__)

COMMANDS = [norm, sweep, decompose, wave, verify, ledger]

EXIT_USAGE = 2
# Parser bookkeeping, not command parameters
RESERVED = {"command", "handler", "config", "output", "seed", "jobs", "log_level"}


def build_parsers() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="orlicz-lab", description="Orlicz-space numerical laboratory")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parent = common_options()

    commands = {}
    # Include one sub-parser per command module
    for module in COMMANDS:
        sub = subparsers.add_parser(module.NAME, help=module.HELP, parents=[parent])
        module.register(sub)
        sub.set_defaults(handler=module.run)
        commands[module.NAME] = sub
    return parser, commands


def to_run_config(args: argparse.Namespace) -> RunConfig:
    """Validated view of the parsed arguments.

    Rejects --jobs below 1, parameters outside their domain (alpha, R, c,
    ds ... must be positive, n_r at least 2) and keys no command declares.
    """
    params = {}
    for key, value in vars(args).items():
        if key in RESERVED or value is None:
            continue
        if isinstance(value, list) and not all(isinstance(v, (int, float)) for v in value):
            continue
        if isinstance(value, (str, int, float, bool, list)):
            params[key] = value
    return RunConfig(command=args.command, params=params, output=args.output, seed=args.seed, jobs=args.jobs)


def dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, merge the config file and run one command.

    Args:
        argv: Arguments without the program name; defaults to sys.argv.

    Returns:
        0 ok, 1 verification failure, 2 usage error, 3 numerical failure,
        4 blow-up.
    """
    parser, commands = build_parsers()
    try:
        args = parser.parse_args(argv)
        if args.config:
            apply_config(commands[args.command], read_config(args.config))
            args = parser.parse_args(argv)
        configure_logging(args.log_level)
        run_config = to_run_config(args)
        logger.info("running %s", run_config.command)
        logger.debug("parameters %s", run_config.params.model_dump(exclude_none=True))
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ValidationError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrliczLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
