"""Command-line interface.

Subcommands: check, fixedpoint, classify, trace, mortality, mec, oracle.
Exit codes: 0 reachable/positive, 1 unreachable/negative, 2 undecided,
64 usage error, 65 data error.  All rational values are printed exactly,
as strings like ``7/12``; the text format mirrors tuple notation such as
``(13/18, 2/3, 1/4)`` while ``--format json`` (the default) emits a
machine-readable object.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import io as mdpio
from .bellman import ActionClass, BellmanOperator
from .errors import BellreachError
from .mdp import Objective, maximal_end_components, remove_end_components
from .solver import (
    Reachable,
    Undecided,
    Unreachable,
    Verdict,
    brute_force_reach,
    decide_bor,
    decide_mortality,
    trace,
)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bellreach", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, objective=True, start=False, target=False):
        p.add_argument("--mdp", required=True, help="path to an MDP document")
        if objective:
            p.add_argument(
                "--objective", required=True, choices=["max", "min"]
            )
        if start:
            p.add_argument("--start", required=True, help="vector, e.g. 1,1/3,2/3")
        if target:
            p.add_argument("--target", required=True, help="vector, e.g. 7/12,1/4,1/4")
        p.add_argument("--format", choices=["json", "text"], default="json")

    p = sub.add_parser("check", help="decide reachability of the target vector")
    common(p, start=True, target=True)
    p = sub.add_parser("fixedpoint", help="print the exact fixed point")
    common(p)
    p = sub.add_parser("classify", help="print tight/leaking actions and the radius")
    common(p)
    p = sub.add_parser("trace", help="print iterates with attaining actions")
    common(p, start=True)
    p.add_argument("--steps", required=True, type=int)
    p = sub.add_parser("mortality", help="decide mortality (all starts reach)")
    common(p)
    p = sub.add_parser("mec", help="print maximal end components or the reduced MDP")
    p.add_argument("--mdp", required=True)
    p.add_argument("--remove", action="store_true")
    p.add_argument("--objective", choices=["max", "min"])
    p.add_argument("--format", choices=["json", "text"], default="json")
    p = sub.add_parser("oracle", help="brute-force reachability up to a bound")
    common(p, start=True, target=True)
    p.add_argument("--bound", required=True, type=int)
    return parser


def run_cli(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(f"bellreach: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command == "mec" and args.remove and not args.objective:
        print("bellreach: mec --remove requires --objective", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args)
    except BellreachError as exc:
        print(f"bellreach: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"bellreach: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


def _dispatch(args) -> int:
    if args.command == "mec":
        return _cmd_mec(args)
    mdp = mdpio.load_mdp(args.mdp)
    op = BellmanOperator(mdp, Objective(args.objective))
    if args.command == "check":
        verdict = decide_bor(op, mdpio.parse_vector(args.start), mdpio.parse_vector(args.target))
        _emit(args, _verdict_dict(verdict), _verdict_text(verdict))
        return _verdict_exit(verdict)
    if args.command == "fixedpoint":
        mu = op.fixed_point()
        _emit(
            args,
            {"objective": args.objective, "fixed_point": _vec(mu)},
            [f"fixed point: {mdpio.format_vector(mu)}"],
        )
        return EXIT_POSITIVE
    if args.command == "classify":
        mu = op.fixed_point()
        classes = op.classify_actions(mu)
        radius = op.tight_radius(mu)
        lines = [f"fixed point: {mdpio.format_vector(mu)}"]
        lines += [f"{name}: {cls.value}" for name, cls in classes.items()]
        lines.append(f"tight radius: {radius}")
        _emit(
            args,
            {
                "fixed_point": _vec(mu),
                "actions": {name: cls.value for name, cls in classes.items()},
                "tight_radius": str(radius),
            },
            lines,
        )
        return EXIT_POSITIVE
    if args.command == "trace":
        steps = trace(op, mdpio.parse_vector(args.start), args.steps)
        payload = {
            "steps": [
                {
                    "vector": _vec(step.vector),
                    "chosen": None
                    if step.chosen is None
                    else {
                        state: sorted(ids)
                        for state, ids in zip(mdp.decision_states, step.chosen)
                    },
                }
                for step in steps
            ]
        }
        lines = []
        for k, step in enumerate(steps):
            suffix = ""
            if step.chosen is not None:
                chosen = ", ".join(
                    f"{state}:{{{','.join(sorted(ids))}}}"
                    for state, ids in zip(mdp.decision_states, step.chosen)
                )
                suffix = f"  via {chosen}"
            lines.append(f"step {k}: {mdpio.format_vector(step.vector)}{suffix}")
        _emit(args, payload, lines)
        return EXIT_POSITIVE
    if args.command == "mortality":
        verdict = decide_mortality(op)
        payload = {
            "mortal": verdict.mortal,
            "n": verdict.n,
            "from_zero": _verdict_dict(verdict.from_zero),
            "from_one": _verdict_dict(verdict.from_one),
        }
        lines = [
            f"mortal: {'yes' if verdict.mortal else 'no'}"
            + (f" (every start reaches within n = {verdict.n})" if verdict.mortal else "")
        ]
        _emit(args, payload, lines)
        return EXIT_POSITIVE if verdict.mortal else EXIT_NEGATIVE
    if args.command == "oracle":
        hit = brute_force_reach(
            op, mdpio.parse_vector(args.start), mdpio.parse_vector(args.target), args.bound
        )
        payload = {"hit": hit is not None, "n": hit, "bound": args.bound}
        lines = [
            f"hit after n = {hit}" if hit is not None else f"no hit within {args.bound} steps"
        ]
        _emit(args, payload, lines)
        return EXIT_POSITIVE if hit is not None else EXIT_NEGATIVE
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_mec(args) -> int:
    mdp = mdpio.load_mdp(args.mdp)
    if args.remove:
        reduced = remove_end_components(mdp, Objective(args.objective))
        doc = mdpio.mdp_to_dict(reduced)
        _emit(args, doc, json.dumps(doc, indent=2).splitlines())
        return EXIT_POSITIVE
    mecs = maximal_end_components(mdp)
    payload = {
        "mecs": [
            {"states": sorted(ec.states), "actions": sorted(ec.actions)}
            for ec in mecs
        ]
    }
    if mecs:
        lines = [
            f"mec: states {{{', '.join(sorted(ec.states))}}} "
            f"actions {{{', '.join(sorted(ec.actions))}}}"
            for ec in mecs
        ]
    else:
        lines = ["no end components"]
    _emit(args, payload, lines)
    return EXIT_POSITIVE


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _vec(v) -> list[str]:
    return [str(x) for x in v]


def _verdict_dict(verdict: Verdict) -> dict:
    if isinstance(verdict, Reachable):
        return {
            "verdict": "reachable",
            "n": verdict.n,
            "trace": [_vec(x) for x in verdict.trace],
        }
    if isinstance(verdict, Unreachable):
        return {"verdict": "unreachable", "certificate": verdict.certificate.value}
    return {"verdict": "undecided", "reason": verdict.reason}


def _verdict_text(verdict: Verdict) -> list[str]:
    if isinstance(verdict, Reachable):
        lines = [f"reachable after n = {verdict.n} steps", "trace:"]
        lines += [f"  {mdpio.format_vector(x)}" for x in verdict.trace]
        return lines
    if isinstance(verdict, Unreachable):
        return [f"unreachable (certificate: {verdict.certificate.value})"]
    return [f"undecided: {verdict.reason}"]


def _verdict_exit(verdict: Verdict) -> int:
    if isinstance(verdict, Reachable):
        return EXIT_POSITIVE
    if isinstance(verdict, Unreachable):
        return EXIT_NEGATIVE
    return EXIT_UNDECIDED
