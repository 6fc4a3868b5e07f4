"""Command-line entry point: ``timeop verify``, ``timeop sweep``, ``timeop --list-checks``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import SuiteConfig, load_config, validate
from .errors import ConfigError, TimeOpError
from .records import EQ_TAGS
from .report import ReportIOError, ReportPaths, csv_text, emit_report, summary_text

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="timeop", description=__doc__)
    parser.add_argument("--list-checks", action="store_true", help="print the eq_tag catalogue and exit")
    sub = parser.add_subparsers(dest="command")

    verify = sub.add_parser("verify", help="run every check and write the report")
    verify.add_argument("--config", type=Path)
    verify.add_argument("--n-max", type=int)
    verify.add_argument("--omega", type=float)
    verify.add_argument("--tol-exact", type=float)
    verify.add_argument("--tol-quad", type=float)
    verify.add_argument("--out", type=Path, help="report directory")
    verify.add_argument("--csv", action="store_true", help="also print the CSV to stdout")
    verify.add_argument("--quiet", action="store_true", help="suppress the summary")
    verify.add_argument("--workers", type=int)

    sweep = sub.add_parser("sweep", help="residual-vs-truncation CSV for structural identities")
    sweep.add_argument("--config", type=Path)
    sweep.add_argument("--n-max-list", type=_int_list)
    sweep.add_argument("--out", type=Path)
    sweep.add_argument("--workers", type=int)
    return parser


def _apply_overrides(cfg: SuiteConfig, args: argparse.Namespace) -> SuiteConfig:
    changes = {name: getattr(args, name) for name in ("n_max", "omega", "tol_exact", "tol_quad")
               if getattr(args, name, None) is not None}
    try:
        if changes:
            cfg = cfg.with_params(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def cmd_verify(args: argparse.Namespace) -> int:
    from .suite import run_suite

    cfg = _apply_overrides(load_config(args.config), args)
    report = run_suite(cfg, args.workers)
    code = emit_report(report, ReportPaths.in_dir(cfg.out_dir))
    if args.csv:
        sys.stdout.write(csv_text(report.records))
    if not args.quiet:
        sys.stdout.write(summary_text(report))
    return code


def cmd_sweep(args: argparse.Namespace) -> int:
    from .suite import sweep_growth, sweep_records

    cfg = load_config(args.config)
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    if args.n_max_list is not None:
        cfg = replace(cfg, sweep_n_max=args.n_max_list)
        validate(cfg)
    records = sweep_records(cfg, workers=args.workers)
    growth = sweep_growth(records)
    path = cfg.out_dir / "sweep.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(csv_text(records), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    print(f"wrote {len(records)} rows to {path}")
    print(f"worst growth ratio {growth['worst_ratio']:.3g} (limit {growth['limit']:g}) at {growth['where']}")
    ok = bool(growth["ok"]) and all(r.passed for r in records)
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_checks:
        width = max(map(len, EQ_TAGS))
        for tag, desc in EQ_TAGS.items():
            print(f"{tag:<{width}}  {desc}")
        return EXIT_PASS
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    try:
        return cmd_verify(args) if args.command == "verify" else cmd_sweep(args)
    except (ConfigError, ReportIOError, TimeOpError) as exc:
        print(f"timeop: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
