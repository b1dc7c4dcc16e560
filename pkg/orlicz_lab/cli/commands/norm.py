"""L^2, gradient and Orlicz norms of a named family member.

CSV columns: family,param,l2,grad_l2,orlicz
"""
import argparse
import math

import numpy as np

from orlicz_lab.cli.csv_output import write_csv
from orlicz_lab.core.config import get_settings
from orlicz_lab.core.exceptions import ConfigurationError, PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.services import lions_family
from orlicz_lab.services.orlicz import orlicz_norm
from orlicz_lab.services.radial_core import norms, sample_from_closure

NAME = "norm"
HELP = "norms of one member of a concentration family"
HEADER = ["family", "param", "l2", "grad_l2", "orlicz"]
PROFILES = ("lions", "gk", "shifted")


def register(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=["lions", "scaled", "sum", "bubble", "file"])
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--R", type=float, default=1.0, help="dilation radius of the scaled family")
    parser.add_argument("--a", type=float, default=1.0)
    parser.add_argument("--b", type=float, default=1.0)
    parser.add_argument("--profile", choices=PROFILES, default="lions")
    parser.add_argument("--shift", type=float, default=-0.5, help="shift of the shifted Lions profile")
    parser.add_argument("--file", default=None, help="CSV with columns s,v on a uniform grid")
    parser.add_argument("--ds", type=float, default=None, help="log-grid spacing")
    parser.add_argument("--kappa", type=float, default=None)


def _alpha(args) -> float:
    if args.alpha is None:
        raise PreconditionError(f"--alpha is required for family {args.family}")
    return args.alpha


def _profile(args):
    if args.profile == "gk":
        return lions_family.gk_profile()
    if args.profile == "shifted":
        return lions_family.shifted_lions_profile(args.shift)
    return lions_family.lions_profile()


def _read_samples(path: str) -> RadialFunction:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigurationError(f"cannot read samples from {path}: {exc}") from exc
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise PreconditionError("sample file needs two columns s,v and at least two rows")
    s, v = data[:, 0], data[:, 1]
    steps = np.diff(s)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise PreconditionError("sample file must use a uniform increasing s-grid")
    grid = LogGrid(s_min=float(s[0]), s_max=float(s[-1]), n_points=s.size)
    return RadialFunction(grid=grid, values=v)


def build_function(args) -> tuple:
    """(param label, sampled function) for the selected family."""
    ds = args.ds or get_settings().sweep_ds
    if ds <= 0:
        raise PreconditionError("--ds must be positive")
    if args.family == "file":
        if not args.file:
            raise PreconditionError("--file is required for family file")
        return f"file={args.file}", _read_samples(args.file)

    alpha = _alpha(args)
    if args.family == "lions":
        closure = lions_family.lions_f(alpha)
        grid = lions_family.family_grid(alpha, min(ds, alpha / 64.0))
        return f"alpha={alpha:g}", sample_from_closure(closure, grid)
    if args.family == "scaled":
        closure = lions_family.scaled_g(alpha, args.R)
        shift = math.log(args.R)
        grid = LogGrid.from_spacing(min(-2.0, -shift - 2.0), max(4.0 * alpha, 50.0) - shift, min(ds, alpha / 64.0))
        return f"alpha={alpha:g};R={args.R:g}", sample_from_closure(closure, grid)
    if args.family == "sum":
        closure = lions_family.sum_h(args.a, args.b, alpha)
        grid = LogGrid.from_spacing(-2.0, max(4.0 * alpha * alpha, 50.0), ds)
        return f"a={args.a:g};b={args.b:g};alpha={alpha:g}", sample_from_closure(closure, grid)

    profile = _profile(args)
    closure = lions_family.BubbleFunction(alpha, profile)
    grid = LogGrid.from_spacing(-2.0, max(alpha * profile.t_max, 50.0), ds)
    return f"profile={args.profile};alpha={alpha:g}", sample_from_closure(closure, grid)


def run(args) -> int:
    label, f = build_function(args)
    cfg = OrliczConfig(kappa=args.kappa if args.kappa is not None else get_settings().kappa)
    report = norms(f)
    row = {
        "family": args.family,
        "param": label,
        "l2": report.l2,
        "grad_l2": report.grad_l2,
        "orlicz": orlicz_norm(f, cfg),
    }
    write_csv(args.output, HEADER, [row])
    return 0
