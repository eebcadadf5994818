"""Command-line front end.

    vibro-fc --input spec.json --method general --max-quanta 10 [--output out.csv]

Exit statuses: 0 success, 2 parse or invariant failure, 3 method/spec
mismatch, 4 sum-rule deficit above --tolerance (the spectrum is still
written), 5 numerical non-convergence. VIBROFC_LOG selects the stderr log
level (error, warn, info, debug; default warn).
"""

import argparse
import logging
import os
import sys
from dataclasses import replace

from .errors import AccuracyError, MethodMismatchError, SpecError, VibrofcError
from .spectrum import METHODS, compute_spectrum, parse_spec, sorted_by_probability, write_spectrum

log = logging.getLogger("vibrofc")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging():
    name = os.environ.get("VIBROFC_LOG", "warn").strip().lower()
    level = _LOG_LEVELS.get(name)
    logging.basicConfig(stream=sys.stderr, level=level or logging.WARNING, format="%(levelname)s %(message)s")
    if level is None and name:
        log.warning("unknown VIBROFC_LOG value %r, using warn", name)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vibro-fc",
        description="Franck-Condon spectra for harmonic vibronic transitions.",
    )
    parser.add_argument("--input", required=True, metavar="PATH", help="molecule spec (JSON)")
    parser.add_argument("--method", required=True, choices=METHODS, help="FC engine to use")
    parser.add_argument(
        "--max-quanta",
        required=True,
        type=int,
        metavar="K",
        help="cutoff on total final quanta (overrides the spec file)",
    )
    parser.add_argument("--output", metavar="PATH", help="destination file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    parser.add_argument(
        "--epsilon",
        type=float,
        metavar="E",
        help="smallest damping parameter of the tomographic ladder (default 0.05)",
    )
    parser.add_argument(
        "--tolerance",
        type=float,
        default=1e-6,
        metavar="T",
        help="largest acceptable sum-rule deficit (default 1e-6)",
    )
    parser.add_argument("--threads", type=int, metavar="W", help="worker threads for the line map")
    parser.add_argument(
        "--sort-by-probability",
        action="store_true",
        help="emit lines in descending probability instead of enumeration order",
    )
    return parser


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    if args.max_quanta < 0:
        log.error("--max-quanta must be nonnegative, got %d", args.max_quanta)
        return 2

    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        log.error("cannot read %s: %s", args.input, exc)
        return 2

    try:
        spec = parse_spec(text)
        spec = replace(spec, max_final_quanta=args.max_quanta)
    except SpecError as exc:
        log.error("%s", exc)
        return 2

    try:
        result = compute_spectrum(spec, args.method, threads=args.threads, epsilon=args.epsilon)
    except MethodMismatchError as exc:
        log.error("%s", exc)
        return 3
    except AccuracyError as exc:
        log.error("%s", exc)
        return 5
    except SpecError as exc:
        log.error("%s", exc)
        return 2
    except VibrofcError as exc:
        log.error("%s", exc)
        return 2

    log.info(
        "%d lines (method=%s, cutoff=%d), sum-rule deficit %.3e",
        len(result.lines),
        result.method,
        result.cutoff,
        result.sum_rule_deficit,
    )

    lines = result.lines
    if args.sort_by_probability:
        lines = sorted_by_probability(lines)
    try:
        if args.output:
            write_spectrum(lines, args.format, args.output)
        else:
            write_spectrum(lines, args.format, sys.stdout)
    except OSError as exc:
        log.error("cannot write %s: %s", args.output, exc)
        return 2

    if result.sum_rule_deficit > args.tolerance:
        log.error(
            "sum-rule deficit %.3e exceeds tolerance %.3e; raise the cutoff",
            result.sum_rule_deficit,
            args.tolerance,
        )
        return 4
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
