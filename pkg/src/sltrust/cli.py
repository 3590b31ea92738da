"""Command-line interface.

Exit codes: 0 success, 1 internal or partial failure, 2 usage or input
validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .calibration import compute_ece, make_uniform_bins
from .data import SynthSpec, read_records, synth_generate, write_curves, write_records, write_report
from .opinion import PriorConfig
from .records import LOGITS, RecordError
from .temperature import DegenerateInputError, TemperatureFit, apply_temperature_all, fit_temperature, mean_nll
from .trust import QuantifierConfig, quantify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_input(p):
    p.add_argument("--input", "-i", required=True, help="record file (.csv or .jsonl)")
    p.add_argument("--format", choices=["auto", "probs", "logits"], default="auto",
                   help="record variant (default: detect from header/keys)")


def _add_quantifier(p):
    p.add_argument("--bins", type=int, default=10, help="probability clusters M (default 10)")
    p.add_argument("--ece-bins", type=int, default=None, help="ECE bins (default: same as --bins)")
    p.add_argument("--alpha", type=float, default=1.0, help="penalty for under-confident cells (default 1)")
    p.add_argument("--beta", type=float, default=1.0, help="penalty for over-confident cells (default 1)")
    p.add_argument("--prior-weight", type=float, default=2.0, help="prior weight W (default 2)")
    p.add_argument("--base-rate", type=float, default=0.5, help="base rate a (default 0.5)")
    p.add_argument("--temperature", type=float, default=1.0,
                   help="temperature applied to logit input before softmax (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sltrust", description="Evidence-based trust metrics for classifier prediction logs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantify", help="trust report for one record file")
    _add_input(p)
    _add_quantifier(p)
    p.add_argument("--output", "-o", help="report JSON path")

    p = sub.add_parser("ece", help="expected calibration error")
    _add_input(p)
    p.add_argument("--bins", type=int, default=10, help="ECE bins (default 10)")
    p.add_argument("--temperature", type=float, default=1.0, help="temperature for logit input (default 1)")
    p.add_argument("--output", "-o", help="ECE JSON path")

    p = sub.add_parser("calibrate", help="fit a temperature on logit records")
    _add_input(p)
    p.add_argument("--output", "-o", help="fit summary JSON path (default: stdout)")
    p.add_argument("--temperature", type=float, default=None,
                   help="skip fitting and use this temperature")
    p.add_argument("--emit-calibrated", metavar="PATH", help="write calibrated probability records here")

    p = sub.add_parser("synth", help="generate a synthetic logit log with known ground truth")
    p.add_argument("--samples", "-n", type=int, required=True)
    p.add_argument("--classes", "-c", type=int, default=10)
    p.add_argument("--sharpening", "-k", type=float, default=1.0, help="logit sharpening k (1 = calibrated)")
    p.add_argument("--concentration", type=float, default=1.0, help="symmetric Dirichlet parameter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-truth", action="store_true", help="omit ground-truth probability columns")
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("sweep", help="quantify several tagged files into one curves CSV")
    p.add_argument("inputs", nargs="+", metavar="TAG=PATH")
    p.add_argument("--format", choices=["auto", "probs", "logits"], default="auto")
    _add_quantifier(p)
    p.add_argument("--output", "-o", required=True, help="curves CSV path")
    return parser


def _config(args) -> QuantifierConfig:
    try:
        return QuantifierConfig(
            bin_count=args.bins,
            alpha=args.alpha,
            beta=args.beta,
            prior=PriorConfig(args.prior_weight, args.base_rate),
            ece_bins=args.ece_bins,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_probs(path, fmt, temperature):
    rf = read_records(path, fmt)
    if rf.kind == LOGITS:
        rf = apply_temperature_all(rf, temperature)
    return rf


def _emit_json(obj, path):
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_quantify(args) -> int:
    config = _config(args)
    report = quantify(_load_probs(args.input, args.format, args.temperature), config)
    if args.output:
        write_report(report, args.output)
    print(report.summary())
    return EXIT_OK


def run_ece(args) -> int:
    try:
        scheme = make_uniform_bins(args.bins)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = compute_ece(_load_probs(args.input, args.format, args.temperature), scheme)
    if args.output:
        _emit_json(result.to_dict(), args.output)
    print(f"ece          {result.ece:.6f}")
    return EXIT_OK


def run_calibrate(args) -> int:
    rf = read_records(args.input, args.format)
    if rf.kind != LOGITS:
        raise UsageError(f"{args.input}: temperature scaling needs logit records, got probabilities")
    if args.temperature is not None:
        t = args.temperature
        if not t > 0:
            raise UsageError("--temperature must be positive")
        fit = TemperatureFit(t, mean_nll(rf, 1.0), mean_nll(rf, t), 0, False)
    else:
        fit = fit_temperature(rf)
    _emit_json(fit.to_dict(), args.output)
    if args.emit_calibrated:
        write_records(apply_temperature_all(rf, fit.temperature), args.emit_calibrated)
    return EXIT_OK


def run_synth(args) -> int:
    try:
        spec = SynthSpec(args.samples, args.classes, args.sharpening, args.concentration, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_records(synth_generate(spec), args.output, include_truth=not args.no_truth)
    return EXIT_OK


def _parse_tagged(items):
    pairs = []
    for item in items:
        tag, sep, path = item.partition("=")
        if not sep or not tag or not path:
            raise UsageError(f"expected TAG=PATH, got {item!r}")
        pairs.append((tag, path))
    return pairs


def run_sweep(args) -> int:
    config = _config(args)
    tagged, failed = [], 0
    for tag, path in _parse_tagged(args.inputs):
        try:
            tagged.append((tag, quantify(_load_probs(path, args.format, args.temperature), config)))
        except (OSError, RecordError) as exc:
            failed += 1
            print(f"sltrust: {tag}: {exc}", file=sys.stderr)
    write_curves(tagged, args.output)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "quantify": run_quantify,
    "ece": run_ece,
    "calibrate": run_calibrate,
    "synth": run_synth,
    "sweep": run_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, RecordError, DegenerateInputError) as exc:
        print(f"sltrust: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"sltrust: {exc.filename}: no such file", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sltrust: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # noqa: BLE001
        print(f"sltrust: internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
