"""Deterministic CSV/JSON report emission.

Floats are rendered at 12 significant digits, scientific notation outside
[1e-4, 1e8), so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os


def fmt_float(v) -> str:
    """12 significant digits; fixed point inside [1e-4, 1e8), else scientific."""
    v = float(v)
    if v == 0.0:
        return "0"
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    a = abs(v)
    if 1e-4 <= a < 1e8:
        exp10 = math.floor(math.log10(a))
        decimals = max(0, 11 - exp10)
        s = f"{v:.{decimals}f}"
        if "." in s:
            s = s.rstrip("0").rstrip(".")
        return s
    s = f"{v:.11e}"
    mant, exp = s.split("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return f"{mant}e{int(exp):+03d}"


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, complex):
        return f"{fmt_float(v.real)}{'+' if v.imag >= 0 else '-'}{fmt_float(abs(v.imag))}j"
    return str(v)


def write_csv(path: str, header: list, rows: list) -> None:
    """Write rows (sequences aligned with header) with fixed formatting."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_value(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return float(fmt_float(obj))
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return obj


def write_json(path: str, payload: dict) -> None:
    """Deterministic JSON: sorted keys, floats pre-rounded to 12 digits."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
