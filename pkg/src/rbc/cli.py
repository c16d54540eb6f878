"""Command-line interface.

Subcommands: run (simulate a protocol run to a transcript file), verify
(check a transcript file), attack (Monte Carlo cheating trials), capacity
(traffic accounting).  Exit codes are a stable contract:

    0  success / verifier accepted
    1  usage, invalid parameters, or unparseable file
    2  protocol aborted (transcript still written, abort reason recorded)
    3  verifier rejected

All randomness flows from the explicit seed flags.  RBC_FORMAT (json or
table) picks the default output format where --format applies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .adversary import run_attack
from .analysis import capacity_report
from .netsim import simulate
from .spacetime import GeometryError, ProtocolParams, exact_str
from .transcript_io import (TranscriptFormatError, parse_transcript,
                            serialize_transcript)
from .verifier import Verdict, verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2
EXIT_REJECT = 3


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 per the CLI contract."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_geometry(p: argparse.ArgumentParser, dx="1", delta="0.005", dt="0.01"):
    p.add_argument("--dx", default=dx, help="site separation, light-seconds")
    p.add_argument("--delta", default=delta, help="lab placement tolerance")
    p.add_argument("--dt", default=dt, help="per-round challenge window")
    p.add_argument("--intra-delay", default=None,
                   help="same-site delay in [0, 2*delta]; default delta")


def _params(args) -> ProtocolParams:
    return ProtocolParams(args.m, args.dx, args.delta, args.dt,
                          intra_delay=args.intra_delay)


def verdict_to_json_obj(verdict: Verdict) -> dict:
    return {
        "outcome": verdict.outcome,
        "bit": verdict.bit,
        "reason": verdict.reason,
        "detail": verdict.detail,
        "reject_position": (None if verdict.reject_position is None
                            else list(verdict.reject_position)),
        "aggregation_time": (None if verdict.issued_at is None
                             else exact_str(verdict.issued_at)),
    }


def _cmd_run(args) -> int:
    params = _params(args)
    result = simulate(params, args.rounds, args.bit, args.alice_seed,
                      args.bob_seed, dual_unveil=args.dual_unveil)
    text = serialize_transcript(result.transcript)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if result.transcript.abort is not None:
        print(f"protocol aborted: {result.transcript.abort}", file=sys.stderr)
        return EXIT_ABORT
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        with open(args.transcript, "r", encoding="utf-8") as fh:
            transcript = parse_transcript(fh.read())
    except OSError as exc:
        print(f"cannot read {args.transcript}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TranscriptFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    verdict = verify(transcript)
    print(json.dumps(verdict_to_json_obj(verdict), indent=2))
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def _cmd_attack(args) -> int:
    params = _params(args)
    outcome = run_attack(params, args.rounds, args.strategy, args.trials,
                         args.seed)
    print(json.dumps(outcome.to_json_obj(), indent=2))
    return EXIT_OK


def _cmd_capacity(args) -> int:
    report = capacity_report(args.m, args.dx, args.delta, args.dt, args.baud)
    fmt = args.format or os.environ.get("RBC_FORMAT", "json")
    if fmt not in ("json", "table"):
        print(f"unknown format {fmt!r}; use json or table", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "table":
        print(report.to_table())
    else:
        print(json.dumps(report.to_json_obj(), indent=2))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="rbc", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a protocol run")
    run.add_argument("--m", type=int, required=True, help="security parameter")
    run.add_argument("--rounds", type=int, required=True)
    run.add_argument("--bit", type=int, choices=(0, 1), required=True)
    run.add_argument("--alice-seed", type=int, required=True)
    run.add_argument("--bob-seed", type=int, required=True)
    run.add_argument("--out", required=True, help="output path, - for stdout")
    run.add_argument("--dual-unveil", action="store_true",
                     help="both Alice agents unveil")
    _add_geometry(run)
    run.set_defaults(func=_cmd_run)

    ver = sub.add_parser("verify", help="verify a transcript file")
    ver.add_argument("transcript", help="path to a transcript JSON file")
    ver.set_defaults(func=_cmd_verify)

    att = sub.add_parser("attack", help="Monte Carlo cheating trials")
    att.add_argument("--m", type=int, required=True)
    att.add_argument("--rounds", type=int, required=True)
    att.add_argument("--strategy", required=True,
                     choices=("offset-guess", "honest-relabel"))
    att.add_argument("--trials", type=int, required=True)
    att.add_argument("--seed", type=int, required=True)
    _add_geometry(att)
    att.set_defaults(func=_cmd_attack)

    cap = sub.add_parser("capacity", help="traffic vs channel-rate accounting")
    cap.add_argument("--m", type=int, required=True)
    cap.add_argument("--baud", required=True, help="channel rate, bits/second")
    cap.add_argument("--format", choices=("json", "table"), default=None)
    _add_geometry(cap, dx="0.1", delta="0.00001", dt="0.0001")
    cap.set_defaults(func=_cmd_capacity)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
