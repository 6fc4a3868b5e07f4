"""Report emission: JSON report, flat CSV and a plain-text summary."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import TimeOpError
from .records import EQ_TAGS, VerificationRecord, VerificationReport

SCHEMA_VERSION = "1"
CSV_HEADER = ("check", "eq_tag", "m", "lambda", "n_max", "omega", "residual", "tolerance", "pass")


class ReportIOError(TimeOpError, OSError):
    """A report destination could not be written."""


@dataclass(frozen=True)
class ReportPaths:
    report: Path
    csv: Path
    summary: Path

    @classmethod
    def in_dir(cls, out_dir: str | Path) -> ReportPaths:
        d = Path(out_dir)
        return cls(d / "report.json", d / "checks.csv", d / "summary.txt")


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def csv_text(records: list[VerificationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([
            r.check, r.eq_tag, _num(r.m), _num(r.lam), _num(r.n_max), _num(r.omega),
            repr(r.residual), repr(r.tolerance), "true" if r.passed else "false",
        ])
    return buf.getvalue()


def report_document(report: VerificationReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            **report.metadata,
        },
        "overall_pass": report.passed,
        "record_count": len(report.records),
        "eq_tags": EQ_TAGS,
        "records": [r.as_dict() for r in report.records],
    }


def summary_text(report: VerificationReport) -> str:
    lines = [f"overall: {'PASS' if report.passed else 'FAIL'}",
             f"records: {len(report.records)}"]
    total = Counter(r.eq_tag for r in report.records)
    failed = Counter(r.eq_tag for r in report.failures())
    width = max(map(len, total), default=0)
    for tag in sorted(total):
        worst = max(r.residual for r in report.by_tag(tag))
        lines.append(f"  {tag:<{width}}  {total[tag] - failed[tag]:>4}/{total[tag]:<4} "
                     f"max residual {worst:.3e}")
    for r in report.failures():
        lines.append(f"FAILED {r.check} [{r.eq_tag}] m={_num(r.m)} lambda={_num(r.lam)} "
                     f"residual={r.residual:.3e} tol={r.tolerance:.1e} {r.note}".rstrip())
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_report(report: VerificationReport, paths: ReportPaths) -> int:
    """Write all three artefacts; returns the process exit code (0 pass, 1 fail)."""
    _write(paths.report, json.dumps(report_document(report), indent=2, sort_keys=False) + "\n")
    _write(paths.csv, csv_text(report.records))
    _write(paths.summary, summary_text(report))
    return 0 if report.passed else 1
