"""Command-line interface.

Subcommands: ``analyze`` (measures for a game file), ``table4`` (the
four-player catalog), ``simulate`` (Monte Carlo engines), ``manip``
(manipulation game of a 3-candidate election), ``check`` (rescaling-family
identity checks).  Reports go to stdout as JSON (default) or CSV; every
rational appears as an exact string plus a 4-decimal rendering.

Exit codes: 0 success; 1 a ``check`` identity failed; 2 unreadable or
malformed input; 3 dimension, capacity or degenerate-value errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from typing import Sequence

from . import __version__
from .errors import (AllZeroError, CapacityError, DimensionMismatch, FormatError,
                     GameError, NormalizationUndefined, RescalingError)
from .games import SimpleGame, members
from .io import (allocation_payload, decimal4, file_digest, format_rational,
                 load_game, rational_payload, render_csv, render_json,
                 resolve_rescaling)
from .manipulation import ScoringRule, build_manipulation_game, parse_profile, sincere_outcome
from .measures import MEASURE_TOKENS, compute_report, weighted_semivalue
from .rescaling import RECURSION_FORMS, builtin_family, check_recursion
from .simulate import SimConfig, bargaining, estimate_awards, estimate_query_count
from .tables import four_player_table

_PARSE_ERRORS = (FormatError, RescalingError, GameError, ValueError)
_LIMIT_ERRORS = (DimensionMismatch, CapacityError, NormalizationUndefined, AllZeroError)


def _emit(doc: dict, fmt: str) -> None:
    sys.stdout.write(render_csv(doc) if fmt == "csv" else render_json(doc))


def _game_input(path: str) -> dict:
    return {"path": path, "sha256": file_digest(path)}


def _rescaling_meta(spec: str | None) -> object:
    if spec is None:
        return None
    if spec in ("uniform", "coleman", "shapley"):
        return spec
    return {"path": spec, "sha256": file_digest(spec)}


def _cmd_analyze(args) -> int:
    game = load_game(args.game)
    rescaling = resolve_rescaling(args.rescaling) if args.rescaling else None
    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    report = compute_report(game, rescaling, measures)
    doc = {
        "command": "analyze",
        "version": __version__,
        "inputs": {"game": _game_input(args.game),
                   "rescaling": _rescaling_meta(args.rescaling)},
        "n": game.n,
        "model": game.model,
        "measures": {},
    }
    out = doc["measures"]
    if report.qbar is not None:
        out["qbar"] = rational_payload(report.qbar)
    if report.qstar is not None:
        out["qstar"] = rational_payload(report.qstar)
    for name in ("individual", "semivalue", "shapley", "banzhaf"):
        alloc = getattr(report, name)
        if alloc is not None:
            out[name] = allocation_payload(alloc)
    if report.classification is not None:
        out["classification"] = asdict(report.classification)
    _emit(doc, args.format)
    return 0


def _cmd_table4(args) -> int:
    rows = []
    for row in four_player_table():
        rows.append({
            "label": row.label,
            "coleman": rational_payload(row.coleman),
            "qstar0": rational_payload(row.qstar0),
            "reference_coleman": row.reference_coleman,
            "reference_qstar0": row.reference_qstar0,
            "coleman_agrees": row.coleman_agrees,
            "qstar0_agrees": row.qstar0_agrees,
        })
    doc = {"command": "table4", "version": __version__, "rows": rows}
    _emit(doc, args.format)
    return 0


def _cmd_simulate(args) -> int:
    game = load_game(args.game)
    if not isinstance(game, SimpleGame):
        raise DimensionMismatch("simulation needs a simple game")
    cfg = SimConfig(trials=args.trials, seed=args.seed, workers=args.workers)
    rescaling = resolve_rescaling(args.rescaling) if args.rescaling else None
    doc = {
        "command": "simulate",
        "version": __version__,
        "inputs": {"game": _game_input(args.game),
                   "rescaling": _rescaling_meta(args.rescaling)},
        "mode": args.mode,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "workers": cfg.workers,
    }
    if args.mode == "query":
        est = estimate_query_count(game, cfg)
        doc["stop_counts"] = list(est.stop_counts)
        doc["mean"] = rational_payload(est.mean)
        doc["stderr"] = est.stderr
    elif args.mode == "awards":
        if rescaling is None:
            raise FormatError("--rescaling is required for awards mode")
        est = estimate_awards(game, rescaling, cfg, normalized=args.normalized)
        doc["normalized"] = est.normalized
        doc["means"] = allocation_payload(est.means)
        doc["stderrs"] = {str(i): v for i, v in sorted(est.stderrs.items())}
    else:  # bargain
        if rescaling is None:
            raise FormatError("--rescaling is required for bargain mode")
        if args.exact:
            values = bargaining(game, rescaling, mode="exact")
            doc["exact"] = True
            doc["r"] = allocation_payload(values.r)
            doc["pi"] = allocation_payload(values.pi)
        else:
            est = bargaining(game, rescaling, mode="montecarlo", cfg=cfg)
            doc["exact"] = False
            doc["r"] = allocation_payload(est.r)
            doc["pi"] = allocation_payload(est.pi)
            doc["capped_trials"] = est.capped_trials
    _emit(doc, args.format)
    return 0


def _cmd_manip(args) -> int:
    profile = parse_profile(args.profile)
    rule = ScoringRule(_parse_fraction(args.alpha))
    game = build_manipulation_game(profile, rule)
    family = builtin_family("uniform")
    report = compute_report(game, family, ("qbar", "qstar", "individual"))
    outcome = sincere_outcome(profile, rule)
    doc = {
        "command": "manip",
        "version": __version__,
        "profile": list(profile),
        "alpha": format_rational(rule.alpha),
        "sincere_winners": sorted(outcome.support),
        "n": game.n,
        "minimal_winning": [list(members(m)) for m in game.minimal_winning_coalitions()],
        "size_profile": list(game.size_profile()),
        "qbar": rational_payload(report.qbar),
        "qstar0": rational_payload(report.qstar),
        "individual_qstar0": allocation_payload(report.individual),
    }
    _emit(doc, args.format)
    return 0


def _cmd_check(args) -> int:
    family = builtin_family(args.family)
    report = check_recursion(family, args.form, args.n_max)
    self_dual = {str(n): family.row(n).is_self_dual() for n in range(1, args.n_max + 1)}
    doc = {
        "command": "check",
        "version": __version__,
        "family": args.family,
        "form": args.form,
        "n_max": args.n_max,
        "holds": report.holds,
        "violations": [
            {"n": n, "k": k, "lhs": format_rational(lhs), "rhs": format_rational(rhs)}
            for n, k, lhs, rhs in report.violations
        ],
        "self_dual_rows": self_dual,
        "c_norm": {str(n): rational_payload(family.row(n).c_norm())
                   for n in range(1, args.n_max + 1)},
    }
    _emit(doc, args.format)
    return 0 if report.holds else 1


def _parse_fraction(text: str):
    from .io import parse_rational
    return parse_rational(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="querypower",
        description="Exact power and decisiveness measures for simple games "
                    "and TU-games, with Monte Carlo cross-checks.",
        epilog="Set QUERYPOWER_N_MAX to override the dense-enumeration capacity bound.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("analyze", help="compute measures for a game file")
    p.add_argument("--game", required=True, help="path to a game document")
    p.add_argument("--rescaling", help="uniform|coleman|shapley or a document path")
    p.add_argument("--measures", default="qbar,qstar",
                   help=f"comma list from {','.join(MEASURE_TOKENS)}")
    add_format(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("table4", help="the 29-game four-player catalog")
    add_format(p)
    p.set_defaults(fn=_cmd_table4)

    p = sub.add_parser("simulate", help="Monte Carlo engines")
    p.add_argument("--game", required=True)
    p.add_argument("--rescaling", help="needed for awards and bargain modes")
    p.add_argument("--mode", choices=("query", "awards", "bargain"), required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact", action="store_true",
                   help="bargain mode: evaluate the closed form instead of sampling")
    p.add_argument("--normalized", action="store_true",
                   help="awards mode: divide awards by the row's c_norm")
    add_format(p)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("manip", help="manipulation game of a 3-candidate election")
    p.add_argument("--profile", required=True, help='orders like "abc,abc,bac,cba"')
    p.add_argument("--alpha", required=True, help='middle-rank score, e.g. "2/5"')
    add_format(p)
    p.set_defaults(fn=_cmd_manip)

    p = sub.add_parser("check", help="rescaling-family identity checks")
    p.add_argument("--family", choices=("uniform", "coleman", "shapley"), required=True)
    p.add_argument("--form", choices=RECURSION_FORMS, required=True)
    p.add_argument("--n-max", type=int, required=True, dest="n_max")
    add_format(p)
    p.set_defaults(fn=_cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _LIMIT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
