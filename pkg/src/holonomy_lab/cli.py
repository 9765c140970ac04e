"""Command-line front end.

One subcommand per capability; the CLI is a thin shell over the library so
every numerical result is reproducible programmatically.  Exit codes:
0 success, 2 invalid input, 3 numerical failure (the diagnostic carries the
achieved error).
"""

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import asymptotics, holonomy, lattice, paths, spectrum
from .errors import NumericalError, SchemaError, ValidationError
from .serialize import (
    bohr_to_dict,
    decay_report_to_dict,
    holonomy_to_dict,
    matrix_to_dict,
    matrix_to_text,
    parse_residuals_csv,
    residuals_to_csv,
    sweep_to_csv,
    to_json,
    fmt,
)


def _load_json_arg(value, what):
    """Accept an inline JSON object or a path to a JSON file."""
    text = value
    if not value.lstrip().startswith(("{", "[")):
        try:
            with open(value, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {what} file {value!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON for {what}: {exc}") from exc


def _load_profile(value):
    return paths.load_path_spec(_load_json_arg(value, "path spec"))


def _basis_value(label):
    label = label.strip()
    if label == "pi":
        return math.pi
    if label.startswith("sqrt"):
        return math.sqrt(float(Fraction(label[4:])))
    return float(Fraction(label))


def _parse_basis(text):
    labels = tuple(s.strip() for s in text.split(","))
    if not labels or any(not s for s in labels):
        raise ValidationError(f"cannot parse basis {text!r}")
    return labels, tuple(_basis_value(s) for s in labels)


def _parse_vectors(text):
    return [tuple(Fraction(v.strip()) for v in part.split(","))
            for part in text.split(";") if part.strip()]


def _parse_point(text, rank):
    kind, _, rest = text.partition(":")
    if kind == "real":
        return spectrum.real_point(float(rest))
    if kind == "torus":
        angles = tuple(float(v) for v in rest.split(",")) if rest else ()
        if len(angles) != rank:
            raise ValidationError(
                f"torus point of rank {len(angles)} against basis rank {rank}"
            )
        return spectrum.torus_point(angles)
    raise ValidationError(f"point must be 'real:<y>' or 'torus:<angles>', got {text!r}")


def _parse_terms(items, rank):
    terms = []
    for item in items:
        coords = item.get("coords", [])
        terms.append((complex(item.get("re", 0.0), item.get("im", 0.0)), coords))
    return spectrum.CharacterSum(terms, rank)


def _build_f0(desc):
    if desc is None or desc.get("kind") == "zero":
        return spectrum._zero_f0
    kind = desc.get("kind")
    if kind == "bump":
        return spectrum.bump(desc["center"], desc["halfwidth"], desc.get("height", 1.0))
    if kind == "f_rt":
        r, t = float(desc["r"]), float(desc["t"])
        return lambda c: holonomy.f_rt(r, t, c)
    raise SchemaError(f"unknown f0 kind {desc!r}")


def _parse_element(payload, basis):
    if not isinstance(payload, dict):
        raise SchemaError("algebra element must be a JSON object")
    f1 = _parse_terms(payload.get("f1", []), len(basis.labels))
    return spectrum.AlgebraElement(basis=basis, f1=f1, f0=_build_f0(payload.get("f0")))


def _parse_nbhd(payload, basis):
    sets = []
    for item in payload:
        t = item.get("type")
        if t == 1:
            sets.append(spectrum.type1(item["intervals"]))
        elif t == 2:
            sets.append(spectrum.type2(item["compact"]))
        elif t == 3:
            f = _parse_terms(item["terms"], basis.rank)
            discs = [(complex(d.get("re", 0.0), d.get("im", 0.0)), d["radius"])
                     for d in item["discs"]]
            sets.append(spectrum.type3(f, basis, discs))
        else:
            raise SchemaError(f"subbasis set type must be 1, 2 or 3, got {t!r}")
    return sets


def _seq_values(expr, count):
    env = {"pi": math.pi}
    try:
        code = compile(expr.replace("2pi", "2*pi"), "<seq>", "eval")
        return [float(eval(code, {"__builtins__": {}}, {**env, "n": n}))
                for n in range(1, count + 1)]
    except Exception as exc:
        raise ValidationError(f"cannot evaluate sequence expression {expr!r}: {exc}") from exc


def _emit(args, text):
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write {args.out!r}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _c_grid(args):
    if args.c_steps < 1:
        raise ValidationError("--c-steps must be at least 1")
    return np.linspace(args.c_min, args.c_max, args.c_steps)


def _cmd_holonomy(args):
    p = _load_profile(args.path)
    h = holonomy.integrate_holonomy(p, args.c, args.tol, max_steps=args.max_steps)
    if args.format == "json":
        _emit(args, to_json(holonomy_to_dict(args.c, h)))
    else:
        _emit(args, "c,a_re,a_im,b_re,b_im\n" + ",".join(
            [fmt(args.c), fmt(h.a.real), fmt(h.a.imag), fmt(h.b.real), fmt(h.b.imag)]
        ) + "\n")
    return 0


def _cmd_sweep(args):
    p = _load_profile(args.path)
    sw = holonomy.sweep(p, _c_grid(args), args.tol)
    _emit(args, sweep_to_csv(sw))
    return 0


def _cmd_decompose(args):
    p = _load_profile(args.path)
    if args.windows is not None:
        grid = asymptotics.dyadic_grid(args.c_min, args.windows, args.points_per_window)
        if args.c_max is not None and abs(grid[-1] - args.c_max) > 1e-9 * args.c_max:
            raise ValidationError(
                f"--windows {args.windows} from {args.c_min:g} ends at {grid[-1]:g}, "
                f"not at --c-max {args.c_max:g}"
            )
    else:
        if args.c_max is None:
            raise ValidationError("--c-max is required without --windows")
        grid = _c_grid(args)
    residuals = asymptotics.residual_sweep(p, args.branch, grid, args.tol)
    _emit(args, residuals_to_csv(residuals))
    return 0


def _cmd_bound(args):
    try:
        with open(args.infile, "r", encoding="utf-8") as fh:
            residuals = parse_residuals_csv(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {args.infile!r}: {exc}") from exc
    report = asymptotics.verify_decay_bound(residuals, args.c0, ratio=args.ratio)
    _emit(args, to_json(decay_report_to_dict(report)))
    return 0


def _cmd_bohr_mean(args):
    terms = []
    for part in args.terms.split(";"):
        try:
            vals = [float(v) for v in part.split(",")]
        except ValueError as exc:
            raise ValidationError(f"cannot parse term {part!r}: {exc}") from exc
        if len(vals) != 3:
            raise ValidationError(
                "--terms must be 're,im,freq' triples separated by ';'"
            )
        terms.append((complex(vals[0], vals[1]), vals[2]))
    poly = asymptotics.TrigPolynomial(terms)
    if args.l is not None:
        result = asymptotics.fourier_bohr_coefficient(poly, args.l, args.T, args.samples)
    else:
        result = asymptotics.bohr_mean(poly, args.T, args.samples)
    _emit(args, to_json(bohr_to_dict(result)))
    return 0


def _cmd_span(args):
    labels, _ = _parse_basis(args.basis)
    lengths = lattice.finite_lengths(labels, _parse_vectors(args.lengths))
    queries = _parse_vectors(args.query)
    answers = [lattice.zspan_member(q, lengths) for q in queries]
    _emit(args, "\n".join("true" if a else "false" for a in answers) + "\n")
    return 0


def _cmd_matrix(args):
    m = lattice.constellation_matrix(
        preset=args.preset, gamma_includes_circle=args.gamma_includes_circle
    )
    if args.format == "json":
        _emit(args, to_json(matrix_to_dict(m)))
    else:
        _emit(args, matrix_to_text(m))
    return 0


def _cmd_spectrum_eval(args):
    labels, values = _parse_basis(args.basis)
    basis = spectrum.FrequencyBasis(labels=labels, values=values)
    element = _parse_element(_load_json_arg(args.element, "algebra element"), basis)
    pt = _parse_point(args.point, basis.rank)
    value = spectrum.evaluate(pt, element)
    _emit(args, to_json({
        "schema": "holonomy-lab/1",
        "point": args.point,
        "value_re": value.real,
        "value_im": value.imag,
    }))
    return 0


def _cmd_converge(args):
    labels, values = _parse_basis(args.basis)
    basis = spectrum.FrequencyBasis(labels=labels, values=values)
    target = _parse_point(args.target, basis.rank)
    nbhd = _parse_nbhd(_load_json_arg(args.nbhd, "neighborhood family"), basis)
    seq = _seq_values(args.seq, args.n)
    ok = spectrum.converges(seq, target, nbhd, basis)
    _emit(args, to_json({
        "schema": "holonomy-lab/1",
        "sequence": args.seq,
        "n": args.n,
        "target": args.target,
        "converges": bool(ok),
    }))
    return 0


def _add_common(sub, tol=False):
    sub.add_argument("--out", help="write output to this file instead of stdout")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for randomized drivers (deterministic commands ignore it)")
    if tol:
        sub.add_argument("--tol", type=float, default=holonomy.DEFAULT_TOL,
                         help="integrator tolerance in [1e-13, 1e-3]")
        sub.add_argument("--max-steps", type=int, default=holonomy.MAX_STEPS,
                         help="adaptive step budget per integration")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="holonomy-lab",
        description="SU(2) holonomy sweeps, oscillatory decompositions, "
                    "Z-span verdicts and glued-spectrum checks",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("holonomy", help="one holonomy at a single c")
    s.add_argument("--path", required=True, help="path-spec JSON (file or inline)")
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common(s, tol=True)
    s.set_defaults(func=_cmd_holonomy)

    s = subs.add_parser("sweep", help="holonomies over a c grid (CSV)")
    s.add_argument("--path", required=True)
    s.add_argument("--c-min", type=float, required=True)
    s.add_argument("--c-max", type=float, required=True)
    s.add_argument("--c-steps", type=int, required=True)
    _add_common(s, tol=True)
    s.set_defaults(func=_cmd_sweep)

    s = subs.add_parser("decompose", help="residuals against the oscillatory part (CSV)")
    s.add_argument("--path", required=True)
    s.add_argument("--branch", choices=[paths.ALPHA, paths.BETA], required=True)
    s.add_argument("--c-min", type=float, required=True)
    s.add_argument("--c-max", type=float, default=None)
    s.add_argument("--windows", type=int, default=None,
                   help="number of dyadic windows from --c-min (dyadic grid)")
    s.add_argument("--points-per-window", type=int, default=64)
    s.add_argument("--c-steps", type=int, default=200,
                   help="points of the linear grid when --windows is absent")
    _add_common(s, tol=True)
    s.set_defaults(func=_cmd_decompose)

    s = subs.add_parser("bound", help="dyadic-window decay certificate (JSON)")
    s.add_argument("--in", dest="infile", required=True, help="residual CSV")
    s.add_argument("--c0", type=float, required=True)
    s.add_argument("--ratio", type=float, default=asymptotics.DEFAULT_WINDOW_RATIO)
    _add_common(s)
    s.set_defaults(func=_cmd_bound)

    s = subs.add_parser("bohr-mean", help="Bohr mean of a trigonometric polynomial")
    s.add_argument("--terms", required=True, help="'re,im,freq' triples joined by ';'")
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--samples", type=int, default=65536)
    s.add_argument("--l", type=float, default=None,
                   help="extract the coefficient at this frequency instead")
    _add_common(s)
    s.set_defaults(func=_cmd_bohr_mean)

    s = subs.add_parser("span", help="exact Z-span membership queries")
    s.add_argument("--basis", required=True, help="comma-separated basis labels")
    s.add_argument("--lengths", required=True,
                   help="semicolon-separated rational coordinate vectors")
    s.add_argument("--query", required=True)
    _add_common(s)
    s.set_defaults(func=_cmd_span)

    s = subs.add_parser("matrix", help="constellation verdict table")
    s.add_argument("--preset", default="paper")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--gamma-includes-circle", action="store_true")
    _add_common(s)
    s.set_defaults(func=_cmd_matrix)

    s = subs.add_parser("spectrum-eval", help="evaluate an algebra element at a glued point")
    s.add_argument("--basis", required=True)
    s.add_argument("--point", required=True, help="'real:<y>' or 'torus:<angles>'")
    s.add_argument("--element", required=True, help="algebra-element JSON (file or inline)")
    _add_common(s)
    s.set_defaults(func=_cmd_spectrum_eval)

    s = subs.add_parser("converge", help="finite-family convergence certificate")
    s.add_argument("--seq", required=True, help="expression in n, e.g. '2pi*n'")
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--target", required=True)
    s.add_argument("--nbhd", required=True, help="neighborhood-family JSON (file or inline)")
    s.add_argument("--basis", required=True)
    _add_common(s)
    s.set_defaults(func=_cmd_converge)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        # malformed user input that slipped past the parsers
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
