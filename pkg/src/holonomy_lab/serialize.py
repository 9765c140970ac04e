"""Stable CSV/JSON emission and parsing for the CLI's file formats.

All floats are written with 17 significant digits so double-precision
values round-trip bit-faithfully; field order is fixed; JSON payloads
carry the schema marker "holonomy-lab/1".
"""

import io
import json

import numpy as np

from .errors import SchemaError
from .lattice import matrix_mismatches

SCHEMA = "holonomy-lab/1"

SWEEP_HEADER = "c,a_re,a_im,b_re,b_im"
RESIDUAL_HEADER = "c,res_re,res_im,abs_c_res"


def fmt(x):
    """17-significant-digit decimal text of a float."""
    return f"{float(x):.16e}"


def sweep_to_csv(sweep):
    lines = [SWEEP_HEADER]
    for c, h in zip(sweep.c_grid, sweep.values):
        lines.append(",".join([
            fmt(c), fmt(h.a.real), fmt(h.a.imag), fmt(h.b.real), fmt(h.b.imag),
        ]))
    return "\n".join(lines) + "\n"


def parse_sweep_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != SWEEP_HEADER:
        raise SchemaError(f"expected sweep header {SWEEP_HEADER!r}")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if rows.size and rows.shape[1] != 5:
        raise SchemaError("sweep rows must have 5 columns")
    return rows


def residuals_to_csv(residuals):
    lines = [RESIDUAL_HEADER]
    for c, r in residuals:
        lines.append(",".join([
            fmt(c), fmt(r.real), fmt(r.imag), fmt(abs(c * r)),
        ]))
    return "\n".join(lines) + "\n"


def parse_residuals_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != RESIDUAL_HEADER:
        raise SchemaError(f"expected residual header {RESIDUAL_HEADER!r}")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        if len(vals) != 4:
            raise SchemaError("residual rows must have 4 columns")
        out.append((float(vals[0]), complex(float(vals[1]), float(vals[2]))))
    return out


def holonomy_to_dict(c, h):
    return {
        "schema": SCHEMA,
        "c": float(c),
        "a_re": h.a.real, "a_im": h.a.imag,
        "b_re": h.b.real, "b_im": h.b.imag,
        "unitarity_defect": h.unitarity_defect(),
    }


def decay_report_to_dict(report):
    return {
        "schema": SCHEMA,
        "windows": [
            {"c_lo": lo, "c_hi": hi, "sup_abs_c_residual": sup}
            for lo, hi, sup in report.windows
        ],
        "global_sup": report.global_sup,
        "verdict": report.verdict,
        "offending_window": report.offending_window,
        "window_ratio": report.ratio,
    }


def parse_decay_report(payload):
    """Inverse of decay_report_to_dict (lossless for double-precision data)."""
    from .asymptotics import DecayReport

    if payload.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA!r}, got {payload.get('schema')!r}")
    return DecayReport(
        windows=tuple((w["c_lo"], w["c_hi"], w["sup_abs_c_residual"])
                      for w in payload["windows"]),
        global_sup=payload["global_sup"],
        verdict=payload["verdict"],
        offending_window=payload["offending_window"],
        ratio=payload["window_ratio"],
    )


def bohr_to_dict(result):
    return {
        "schema": SCHEMA,
        "value_re": result.value.real,
        "value_im": result.value.imag,
        "error_estimate": result.error,
    }


def matrix_to_dict(matrix):
    cells = []
    for cell in matrix.cells:
        entry = {
            "row": cell.row,
            "column": cell.column,
            "verdict": cell.verdict.tag,
            "glyph": cell.verdict.glyph,
        }
        if cell.verdict.witness:
            entry["witness"] = cell.verdict.witness
        if cell.exception:
            entry["exception"] = cell.exception
        cells.append(entry)
    return {
        "schema": SCHEMA,
        "rows": list(matrix.rows),
        "columns": list(matrix.columns),
        "classical_embedding": [
            {"column": col, "value": val, **({"exception": exc} if exc else {})}
            for col, val, exc in matrix.classical_row
        ],
        "cells": cells,
        "mismatches_with_expected": [
            {"row": r, "column": c, "got": g, "expected": e}
            for r, c, g, e in matrix_mismatches(matrix)
        ],
    }


def matrix_to_text(matrix):
    width = max(len(r) for r in matrix.rows) + 2
    colw = 12
    out = io.StringIO()
    out.write(" " * width)
    for col in matrix.columns:
        out.write(col.ljust(colw))
    out.write("\n")
    for row in matrix.rows:
        out.write(row.ljust(width))
        for col in matrix.columns:
            cell = matrix.cell(row, col)
            text = cell.verdict.glyph
            if cell.exception:
                text += f" ({cell.exception})"
            out.write(text.ljust(colw))
        out.write("\n")
    mismatches = matrix_mismatches(matrix)
    if mismatches:
        out.write("MISMATCHES vs expected table:\n")
        for r, c, got, exp in mismatches:
            out.write(f"  {r} x {c}: got {got}, expected {exp}\n")
    return out.getvalue()


def to_json(payload):
    """Deterministic JSON bytes: fixed insertion order, trailing newline."""
    return json.dumps(payload, indent=2, ensure_ascii=True) + "\n"
