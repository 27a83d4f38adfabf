"""JSON / CSV / plain-text rendering of results.

Rationals are written as "num/den" strings. Values whose decimal expansion
would exceed ``max_digits`` are written as null (JSON) or left blank (CSV);
they can always be recomputed exactly from the integer columns.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from . import __version__
from .exact import format_rational
from .limits import ClusterReport, CriterionRow, DeviationRecord

DEFAULT_MAX_DIGITS = 1000

RECORD_COLUMNS = [
    "n", "h", "p", "k",
    "deviation_num", "deviation_den",
    "limit_num", "limit_den",
    "residual_exp2", "certainty",
]


def allow_big_int_text() -> None:
    # Python >= 3.10.7 caps int<->str conversions at 4300 digits by default.
    setter = getattr(sys, "set_int_max_str_digits", None)
    if setter is not None:
        setter(0)


def _fits(x: Fraction, max_digits: int) -> bool:
    # bit_length * log10(2) bounds the decimal length from above (+1)
    bits = max(x.numerator.bit_length(), x.denominator.bit_length())
    return bits * 0.30103 < max_digits


def estimated_digits(q: Fraction, exponent: int) -> float:
    """Rough decimal length of a rational whose denominator is about q^exponent."""
    return abs(exponent) * math.log10(max(q.numerator, q.denominator, 2))


def lazy_text(q: Fraction, exponent: int, compute: Callable[[], Fraction], max_digits: int) -> Optional[str]:
    """``rational_text(compute())`` unless the value is known to be too long to build."""
    if estimated_digits(q, exponent) > max_digits:
        return None
    return rational_text(compute(), max_digits)


def lazy_parts(q: Fraction, exponent: int, compute: Callable[[], Fraction], max_digits: int) -> List[str]:
    if estimated_digits(q, exponent) > max_digits:
        return ["", ""]
    return rational_parts(compute(), max_digits)


def rational_text(x: Optional[Fraction], max_digits: int = DEFAULT_MAX_DIGITS) -> Optional[str]:
    if x is None or not _fits(x, max_digits):
        return None
    return format_rational(x)


def rational_parts(x: Fraction, max_digits: int) -> List[str]:
    if not _fits(x, max_digits):
        return ["", ""]
    return [str(x.numerator), str(x.denominator)]


def envelope(command: Sequence[str], q: Optional[Fraction], bounds: Dict[str, Any],
             certainty: Dict[str, int], payload: Any, wall_time: Optional[float] = None) -> Dict[str, Any]:
    env = {
        "tool": "krpoly",
        "version": __version__,
        "command": list(command),
        "q": None if q is None else format_rational(q),
        "bounds": bounds,
        "certainty": certainty,
        "payload": payload,
    }
    if wall_time is not None:
        env["wall_time_s"] = round(wall_time, 6)
    return env


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def dump_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def residual_exponent(n: int) -> int:
    """residual = -(q - 1) * q^(this value); for q = 2 it is exactly -2^(this value)."""
    return -n


def record_row(rec: DeviationRecord, max_digits: int) -> List[Any]:
    d = rec.decomposition
    q = rec.q
    return [d.n, d.h, d.p, d.k,
            *lazy_parts(q, d.n, lambda: rec.deviation, max_digits),
            *lazy_parts(q, abs(d.k), lambda: rec.limit, max_digits),
            residual_exponent(d.n), d.certainty]


def record_json(rec: DeviationRecord, max_digits: int) -> Dict[str, Any]:
    d = rec.decomposition
    return {
        "n": d.n, "h": d.h, "p": d.p, "k": d.k,
        "deviation": lazy_text(rec.q, d.n, lambda: rec.deviation, max_digits),
        "closed_form": lazy_text(rec.q, d.n, lambda: rec.closed_form, max_digits),
        "limit": lazy_text(rec.q, abs(d.k), lambda: rec.limit, max_digits),
        "residual": lazy_text(rec.q, d.n, lambda: rec.residual, max_digits),
        "residual_exp2": residual_exponent(d.n),
        "crosschecked": rec.crosschecked,
        "certainty": d.certainty,
    }


def cluster_json(report: ClusterReport, max_digits: int) -> Dict[str, Any]:
    return {
        "max_n": report.max_n,
        "crosscheck_bound": report.crosscheck_bound,
        "phi_members": len(report.records),
        "group_count": len(report.groups),
        "largest_k": report.largest_k,
        "smallest_k": report.smallest_k,
        "max_abs_residual": (
            lazy_text(report.q, min(g.max_residual_exponent for g in report.groups.values()),
                      report.max_abs_residual, max_digits) if report.groups else None
        ),
        "groups": [
            {
                "k": g.k,
                "count": g.count,
                "members": g.members,
                "limit": lazy_text(report.q, abs(g.k), lambda g=g: g.limit, max_digits),
                "max_abs_residual": lazy_text(report.q, g.max_residual_exponent,
                                              lambda g=g: g.max_abs_residual, max_digits),
                "max_residual_exponent": g.max_residual_exponent,
            }
            for g in report.ordered_groups()
        ],
    }


def criterion_json(rows: Sequence[CriterionRow], max_digits: int, flagged_only: bool) -> Dict[str, Any]:
    shown = [r for r in rows if r.flagged] if flagged_only else list(rows)
    return {
        "scanned": len(rows),
        "flagged": [r.n for r in rows if r.flagged],
        "rows": [
            {
                "n": r.n, "k": r.decomposition.k,
                "abs_deviation": rational_text(r.abs_deviation, max_digits),
                "threshold": rational_text(r.threshold, max_digits),
                "flagged": r.flagged,
                "certainty": r.decomposition.certainty,
            }
            for r in shown
        ],
    }


def short(x: Optional[Fraction], width: int = 40) -> str:
    if x is None:
        return "-"
    if not _fits(x, width):
        digits = int(max(x.numerator.bit_length(), x.denominator.bit_length()) * 0.30103) + 1
        return f"<~{digits} digits>"
    return format_rational(x) if x.denominator != 1 else str(x.numerator)


def table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [len(h) for h in header]
    for r in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"
