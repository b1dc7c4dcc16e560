"""Parameter sweeps of the asymptotic probes.

CSV columns: parameter,observed,target,converged
(tail-integrals: parameter,I,J,target_I,target_J,converged)
"""
import argparse
import math

from orlicz_lab.cli.arguments import float_list, int_list
from orlicz_lab.cli.csv_output import write_csv
from orlicz_lab.core.config import get_settings
from orlicz_lab.core.exceptions import NonConvergenceError, PreconditionError
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.trend import TrendReport
from orlicz_lab.services import asymptotics, lions_family

NAME = "sweep"
HELP = "sweep an asymptotic probe along a parameter list"
HEADER = ["parameter", "observed", "target", "converged"]
TAIL_HEADER = ["parameter", "I", "J", "target_I", "target_J", "converged"]
PROBES = [
    "orlicz-limit",
    "tail-integrals",
    "pq-integral",
    "dirac",
    "moser",
    "max-law",
    "cross-scale",
    "profile-bounds",
]


def register(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--probe", required=True, choices=PROBES)
    parser.add_argument("--alphas", type=float_list, default=None)
    parser.add_argument("--betas", type=float_list, default=None)
    parser.add_argument("--n-list", type=int_list, default=None)
    parser.add_argument("--alpha-exp", type=float, default=4.0 * math.pi)
    parser.add_argument("--p", type=float, default=1.0)
    parser.add_argument("--q", type=float, default=1.0)
    parser.add_argument("--a", type=float, default=1.0)
    parser.add_argument("--b", type=float, default=2.0)
    parser.add_argument("--kind", choices=["gradient", "exponential"], default="gradient")
    parser.add_argument("--profile", choices=["lions", "gk", "shifted"], default="lions")
    parser.add_argument("--closed-form", action="store_true", help="Dawson-function evaluation where available")
    parser.add_argument("--ds", type=float, default=None)
    parser.add_argument("--assert", dest="require", action="store_true", help="exit 3 unless the sweep converges")


def _need(values, flag: str):
    if not values:
        raise PreconditionError(f"{flag} is required for this probe")
    return values


def _trend_rows(report: TrendReport):
    return [
        {"parameter": p, "observed": x, "target": report.target, "converged": report.converged}
        for p, x in zip(report.parameters, report.observed)
    ]


def _gaussian(r: float) -> float:
    return math.exp(-r * r)


def run(args) -> int:
    settings = get_settings()
    cfg = OrliczConfig(kappa=settings.kappa)
    ds = args.ds or settings.sweep_ds
    probe = args.probe

    if probe == "tail-integrals":
        alphas = _need(args.alphas, "--alphas")
        rows = []
        for alpha in alphas:
            I, J = asymptotics.tail_integrals(alpha, closed_form=args.closed_form)
            rows.append({"parameter": alpha, "I": I, "J": J, "target_I": 1.0, "target_J": 1.0 / 3.0})
        dist = [abs(r["I"] - 1.0) + abs(r["J"] - 1.0 / 3.0) for r in rows]
        converged = all(b <= a for a, b in zip(dist, dist[1:]))
        for row in rows:
            row["converged"] = converged
        write_csv(args.output, TAIL_HEADER, rows)
        return _verdict(args, converged)

    if probe == "orlicz-limit":
        report = asymptotics.orlicz_limit_sweep(_need(args.alphas, "--alphas"), cfg, ds, args.jobs)
    elif probe == "max-law":
        report = asymptotics.sum_orlicz_max_check(args.a, args.b, _need(args.alphas, "--alphas"), cfg, ds, args.jobs)
    elif probe == "moser":
        report = asymptotics.moser_ratio_sweep(args.alpha_exp, _need(args.betas, "--betas"), cfg, args.jobs)
    elif probe == "cross-scale":
        n_list = _need(args.n_list, "--n-list")
        report = asymptotics.cross_scale_vanishing(
            lions_family.L_prime, lions_family.L_prime, lambda n: float(n), lambda n: float(n) ** 2, n_list
        )
    elif probe == "profile-bounds":
        profile = {
            "lions": lions_family.lions_profile,
            "gk": lions_family.gk_profile,
            "shifted": lambda: lions_family.shifted_lions_profile(-0.5),
        }[args.profile]()
        bounds = asymptotics.profile_norm_bounds(profile, _need(args.alphas, "--alphas"), cfg, ds=ds)
        report = bounds.trend
    else:
        alphas = _need(args.alphas, "--alphas")
        if probe == "pq-integral":
            values = [asymptotics.pq_integral(args.p, args.q, a, closed_form=args.closed_form) for a in alphas]
            bounds = [asymptotics.pq_bound(args.p, args.q, a) for a in alphas]
            rows = [
                {"parameter": a, "observed": v, "target": b, "converged": v <= b}
                for a, v, b in zip(alphas, values, bounds)
            ]
            write_csv(args.output, HEADER, rows)
            return _verdict(args, all(r["converged"] for r in rows))
        report = asymptotics.dirac_sweep(alphas, _gaussian, args.kind)

    write_csv(args.output, HEADER, _trend_rows(report))
    return _verdict(args, report.converged)


def _verdict(args, converged: bool) -> int:
    if args.require and not converged:
        raise NonConvergenceError(f"probe {args.probe} did not converge")
    return 0
