import argparse
from typing import List

from orlicz_lab.core.config import get_settings


def float_list(text: str) -> List[float]:
    """Comma-separated floats; empty lists are rejected."""
    items = [item.strip() for item in str(text).split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list")
    try:
        return [float(item) for item in items]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def int_list(text: str) -> List[int]:
    values = float_list(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError("expected integers")
    return [int(v) for v in values]


def common_options() -> argparse.ArgumentParser:
    """Options shared by every sub-command."""
    settings = get_settings()
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", default=None, help="key = value file; flags override it")
    parent.add_argument("--output", default=None, help="CSV path, relative to ORLAB_OUTPUT_DIR; stdout if omitted")
    parent.add_argument("--jobs", type=int, default=settings.jobs, help="worker threads for sweeps")
    parent.add_argument("--seed", type=int, default=settings.seed, help="seed of randomized suites")
    parent.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parent
