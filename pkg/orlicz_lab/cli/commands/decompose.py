"""Scale-and-profile decomposition of a synthetic sequence.

CSV columns: level,scale_at_ref,profile_grad_norm,remainder_orlicz,stability_defect
With --output, each profile is also written next to it as <stem>_profile_<level>.csv
(columns t,psi).
"""
import argparse
from typing import List

from orlicz_lab.cli.csv_output import write_csv
from orlicz_lab.core.config import get_settings
from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.schemas.decomposition import ExtractionConfig
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.services import decomposition
from orlicz_lab.services.decomposition import Term

NAME = "decompose"
HELP = "extract scales and profiles from a bounded radial sequence"
HEADER = ["level", "scale_at_ref", "profile_grad_norm", "remainder_orlicz", "stability_defect"]
PROFILE_HEADER = ["t", "psi"]

SEQUENCES = {
    "single": [(1.0, 1.0, 1.0)],
    "two-orthogonal": [(1.0, 1.0, 1.0), (1.0, 1.0, 2.0)],
    "two-nonorthogonal": [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0)],
}


def parse_terms(text: str) -> List[Term]:
    """``c:m:p,c:m:p`` -> [(c, m, p), ...] for sum_k c f_{m n^p}."""
    terms = []
    for chunk in str(text).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"term {chunk!r} is not c:m:p")
        try:
            c, m, p = (float(x) for x in parts)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if m <= 0 or p <= 0:
            raise argparse.ArgumentTypeError(f"term {chunk!r} needs positive m and p")
        terms.append((c, m, p))
    if not terms:
        raise argparse.ArgumentTypeError("expected at least one term")
    return terms


def register(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seq", required=True, choices=[*SEQUENCES, "custom"])
    parser.add_argument("--terms", type=parse_terms, default=None, help="custom terms c:m:p,...")
    parser.add_argument("--nmax", type=int, default=60)
    parser.add_argument("--nstep", type=int, default=2)
    parser.add_argument("--count", type=int, default=3, help="number of sampled indices")
    parser.add_argument("--l-max", type=int, default=4)
    parser.add_argument("--rem-tol", type=float, default=0.05)
    parser.add_argument("--ortho-threshold", type=float, default=2.0)


def _n_range(args) -> List[int]:
    if args.count < 1 or args.nstep < 1:
        raise PreconditionError("--count and --nstep must be positive")
    first = args.nmax - args.nstep * (args.count - 1)
    if first < 2:
        raise PreconditionError("sampled indices must stay above 1")
    return list(range(first, args.nmax + 1, args.nstep))


def run(args) -> int:
    if args.seq == "custom":
        if not args.terms:
            raise PreconditionError("--terms is required for --seq custom")
        terms = args.terms
    else:
        terms = SEQUENCES[args.seq]

    n_range = _n_range(args)
    window = min(3, len(n_range))
    cfg = ExtractionConfig(
        a0_window=window,
        ref_count=window,
        l_max=args.l_max,
        rem_tol=args.rem_tol,
        ortho_threshold=args.ortho_threshold,
    )
    seq = decomposition.synthetic_sequence(terms, n_range)
    result = decomposition.decompose(seq, cfg, OrliczConfig(kappa=get_settings().kappa), args.jobs)

    last = cfg.reference(n_range)[-1]
    # merged levels leave more remainder samples than bubbles; the last bubble gets the last one
    offset = len(result.remainder_orlicz) - result.levels
    rows = []
    for level, bubble in enumerate(result.bubbles, start=1):
        rows.append(
            {
                "level": level,
                "scale_at_ref": bubble.scale_at(last),
                "profile_grad_norm": bubble.grad_norm,
                "remainder_orlicz": result.remainder_orlicz[level - 1 + offset],
                "stability_defect": result.stability_defect[level - 1 + offset],
            }
        )
    path = write_csv(args.output, HEADER, rows)

    if path is not None:
        for level, bubble in enumerate(result.bubbles, start=1):
            profile_path = path.with_name(f"{path.stem}_profile_{level}.csv")
            samples = [{"t": t, "psi": v} for t, v in zip(bubble.profile.t_nodes, bubble.profile.values)]
            write_csv(profile_path, PROFILE_HEADER, samples)
    return 0
