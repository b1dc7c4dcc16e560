"""List recorded acceptance runs.

CSV columns: id,status,seed,created_at,criteria,passed
"""
import argparse

from orlicz_lab.cli.csv_output import write_csv
from orlicz_lab.core.config import get_settings
from orlicz_lab.core.exceptions import ConfigurationError
from orlicz_lab.db.session import make_session_factory, session_scope
from orlicz_lab.services import ledger

NAME = "ledger"
HELP = "list verification runs stored in the ledger"
HEADER = ["id", "status", "seed", "created_at", "criteria", "passed"]


def register(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ledger", default=None, help="SQLAlchemy URL; defaults to ORLAB_LEDGER_URL")
    parser.add_argument("--limit", type=int, default=None)


def run(args) -> int:
    url = args.ledger or get_settings().ledger_url
    if not url:
        raise ConfigurationError("no ledger configured; pass --ledger or set ORLAB_LEDGER_URL")
    factory = make_session_factory(url)
    with session_scope(factory) as db:
        runs = ledger.list_runs(db, args.limit)
    write_csv(args.output, HEADER, ledger.summary_rows(runs))
    return 0
