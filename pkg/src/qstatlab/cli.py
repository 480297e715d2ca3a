"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 capacity guard exceeded,
3 internal numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CapacityError, NumericalError, ValidationError
from .harness import describe_experiments, parse_config, run_experiment, write_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CAPACITY = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qstatlab",
        description="Quantum statistical inference experiments: divergences, "
        "large-deviation rates, and model selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run an experiment config and write its report")
    run_parser.add_argument("--config", required=True, help="path to a JSON config")
    run_parser.add_argument("--format", choices=("json", "csv"), default="json")
    run_parser.add_argument("--out", help="output path (overrides config output_path)")
    run_parser.add_argument("--seed", type=int, help="seed override (unsigned 64-bit)")

    validate_parser = sub.add_parser("validate", help="validate a config without running it")
    validate_parser.add_argument("--config", required=True)

    sub.add_parser("list", help="print experiment names and required parameters")
    return parser


def _load_config(path: str):
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list":
        print(describe_experiments())
        return EXIT_OK

    try:
        cfg = _load_config(args.config)
    except ValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION

    if args.command == "validate":
        print(f"ok: {cfg.experiment} config is valid")
        return EXIT_OK

    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            print("seed override must be an unsigned 64-bit integer", file=sys.stderr)
            return EXIT_VALIDATION
        cfg = cfg.with_seed(args.seed)

    try:
        report = run_experiment(cfg)
    except CapacityError as exc:
        print(f"capacity guard: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:  # internal failure surfaces as a numerical error
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    payload = write_report(report, args.format)
    out_path = args.out or cfg.output_path
    if out_path:
        Path(out_path).write_bytes(payload)
        status = "all checks passed" if report.all_passed() else "SOME CHECKS FAILED"
        print(f"wrote {out_path} ({status}, {report.duration_seconds:.2f}s)")
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
