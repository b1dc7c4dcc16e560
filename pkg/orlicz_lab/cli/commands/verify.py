"""Run the acceptance suite.

Prints one line per criterion; exits 1 when any criterion fails.
CSV columns (with --output): criterion,success,runtime
"""
import argparse
import sys

from orlicz_lab.cli.csv_output import write_csv
from orlicz_lab.core.config import get_settings
from orlicz_lab.services.verification import run_suite

NAME = "verify"
HELP = "run the acceptance criteria"
HEADER = ["criterion", "success", "runtime"]


def register(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--only", default=None, help="comma-separated criterion names")
    parser.add_argument("--ledger", default=None, help="SQLAlchemy URL recording the run")


def run(args) -> int:
    names = [n.strip() for n in args.only.split(",") if n.strip()] if args.only else None
    settings = get_settings().model_copy(update={"seed": args.seed})
    outcomes = run_suite(names, settings, args.jobs, args.ledger)

    # keep stdout clean when the CSV goes there
    stream = sys.stderr if args.output == "-" else sys.stdout
    for outcome in outcomes:
        verdict = "PASS" if outcome.success else "FAIL"
        line = f"{outcome.name}: {verdict} ({outcome.runtime:.2f}s)"
        if outcome.detail:
            line += f" {outcome.detail}"
        print(line, file=stream)

    if args.output:
        rows = [{"criterion": o.name, "success": o.success, "runtime": o.runtime} for o in outcomes]
        write_csv(args.output, HEADER, rows)
    return 0 if all(o.success for o in outcomes) else 1
