#!/usr/bin/env python3
"""Render figures from holonomy-lab CSV/JSON outputs.

Reads only the stable file formats of the primary CLI (schema
"holonomy-lab/1"); no imports from the library itself, so the primary
suite runs with this package absent.

Plot kinds:
  decay   residual CSV (+ optional DecayReport JSON) -> |c*residual| vs c,
          log-x, with one sup marker per dyadic window
  f_rt    residual CSV(s) of circle decompositions on a linear grid ->
          |residual| = |f_{r,t}| curves, vanishing at c = 0 and decaying
  sweep   sweep CSV(s) -> holonomy matrix-entry traces over c
  matrix  constellation JSON -> verdict table image with ++/+/-/? glyphs

Usage: render.py --kind decay --in out.csv --report report.json --out decay.png
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCHEMA = "holonomy-lab/1"
SWEEP_HEADER = ["c", "a_re", "a_im", "b_re", "b_im"]
RESIDUAL_HEADER = ["c", "res_re", "res_im", "abs_c_res"]

GLYPHS = {
    "extends_injectively": "++",
    "extends_non_injectively": "+",
    "no_extension": "-",
    "unknown": "?",
}


class SchemaMismatch(Exception):
    pass


@dataclass
class PlotSpec:
    kind: str
    inputs: list
    out: str
    report: str = None
    log_x: bool = False
    log_y: bool = False


def read_csv(path, expected_header):
    lines = [ln for ln in Path(path).read_text().strip().splitlines() if ln]
    if not lines or lines[0].split(",") != expected_header:
        raise SchemaMismatch(
            f"{path}: expected columns {','.join(expected_header)}"
        )
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if data.ndim != 2 or data.shape[1] != len(expected_header):
        raise SchemaMismatch(f"{path}: ragged rows")
    return data


def read_json(path):
    payload = json.loads(Path(path).read_text())
    if payload.get("schema") != SCHEMA:
        raise SchemaMismatch(
            f"{path}: schema {payload.get('schema')!r}, expected {SCHEMA!r}"
        )
    return payload


def render_decay(spec):
    data = read_csv(spec.inputs[0], RESIDUAL_HEADER)
    c, weighted = data[:, 0], data[:, 3]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(c, weighted, lw=0.8, color="tab:blue", label="|c * residual|")
    if spec.report:
        report = read_json(spec.report)
        for i, w in enumerate(report["windows"]):
            lo, hi, sup = w["c_lo"], w["c_hi"], w["sup_abs_c_residual"]
            ax.hlines(sup, lo, hi, color="tab:red", lw=1.8,
                      label="window sup" if i == 0 else None)
            ax.axvline(hi, color="0.8", lw=0.6, zorder=0)
        ax.set_title(f"decay certificate: {report['verdict']} "
                     f"(global sup {report['global_sup']:.3g})")
    else:
        ax.set_title("decay of |c * residual|")
    ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("c")
    ax.set_ylabel("|c * residual|")
    ax.legend(loc="best")
    return fig


def render_f_rt(spec):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in spec.inputs:
        data = read_csv(path, RESIDUAL_HEADER)
        c = data[:, 0]
        modulus = np.hypot(data[:, 1], data[:, 2])
        ax.plot(c, modulus, lw=0.9, label=Path(path).stem)
    ax.set_xlabel("c")
    ax.set_ylabel("|f|")
    ax.set_title("circle-minus-line curves (vanishing at 0, decaying at infinity)")
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.legend(loc="best")
    return fig


def render_sweep(spec):
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for path in spec.inputs:
        data = read_csv(path, SWEEP_HEADER)
        c = data[:, 0]
        stem = Path(path).stem
        axes[0].plot(c, data[:, 1], lw=0.8, label=f"{stem}: Re a")
        axes[0].plot(c, data[:, 2], lw=0.8, ls="--", label=f"{stem}: Im a")
        axes[1].plot(c, data[:, 3], lw=0.8, label=f"{stem}: Re b")
        axes[1].plot(c, data[:, 4], lw=0.8, ls="--", label=f"{stem}: Im b")
    axes[0].set_ylabel("a entry")
    axes[1].set_ylabel("b entry")
    axes[1].set_xlabel("c")
    axes[0].set_title("holonomy matrix entries over c")
    for ax in axes:
        if spec.log_x:
            ax.set_xscale("log")
        ax.legend(loc="upper right", fontsize=7)
    return fig


def render_matrix(spec):
    payload = read_json(spec.inputs[0])
    rows, columns = payload["rows"], payload["columns"]
    cells = {(c["row"], c["column"]): c for c in payload["cells"]}
    fig, ax = plt.subplots(figsize=(1.8 + 1.3 * len(columns), 1.0 + 0.5 * len(rows)))
    ax.set_axis_off()
    table = []
    for row in rows:
        line = []
        for col in columns:
            cell = cells[(row, col)]
            text = cell.get("glyph", GLYPHS.get(cell["verdict"], "?"))
            if "exception" in cell:
                text += f" ({cell['exception']})"
            line.append(text)
        table.append(line)
    the_table = ax.table(cellText=table, rowLabels=rows, colLabels=columns,
                         loc="center", cellLoc="center")
    the_table.scale(1.0, 1.4)
    mismatches = payload.get("mismatches_with_expected", [])
    title = "constellation matrix"
    if mismatches:
        title += f"  ({len(mismatches)} MISMATCHES)"
    ax.set_title(title)
    return fig


RENDERERS = {
    "decay": render_decay,
    "f_rt": render_f_rt,
    "sweep": render_sweep,
    "matrix": render_matrix,
}


def render(spec):
    """Produce the raster image for a plot spec; returns the output path."""
    for path in spec.inputs + ([spec.report] if spec.report else []):
        if not Path(path).exists():
            raise FileNotFoundError(path)
    fig = RENDERERS[spec.kind](spec)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=120)
    plt.close(fig)
    return spec.out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", choices=sorted(RENDERERS), required=True)
    parser.add_argument("--in", dest="inputs", required=True,
                        help="input file, or comma-separated files for overlays")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--report", default=None,
                        help="DecayReport JSON with the dyadic-window sups")
    parser.add_argument("--log-x", action="store_true")
    parser.add_argument("--log-y", action="store_true")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        kind=args.kind,
        inputs=[p.strip() for p in args.inputs.split(",")],
        out=args.out,
        report=args.report,
        log_x=args.log_x,
        log_y=args.log_y,
    )
    try:
        render(spec)
    except (SchemaMismatch, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
