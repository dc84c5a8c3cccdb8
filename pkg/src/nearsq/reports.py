"""Deterministic report serialization: 12-significant-digit JSON and CSV."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction


def sig12(x: float) -> float:
    """Round a float to 12 significant digits for stable, diffable output."""
    return float(f"{x:.12g}")


def fraction_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def _normalize(obj):
    if isinstance(obj, float):
        return sig12(obj)
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def json_report(obj: dict) -> str:
    """Stable JSON text: insertion-ordered keys, floats at 12 significant digits."""
    return json.dumps(_normalize(obj), indent=2) + "\n"


def csv_text(header: list[str], rows: list[list]) -> str:
    """CSV with a header row, comma separators, and LF line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def table_text(obj: dict) -> str:
    """Aligned key/value listing for terminal viewing."""
    flat = _normalize(obj)
    width = max((len(k) for k in flat), default=0)
    lines = [f"{k.ljust(width)}  {json.dumps(v) if isinstance(v, (dict, list)) else v}"
             for k, v in flat.items()]
    return "\n".join(lines) + "\n"
