"""Command-line front end: polynomials, inner products, tables and the verification suite."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from gmpy2 import mpq

from . import __version__
from . import asymptotics as asy
from . import connection as con
from . import zeros as zr
from .polynomial import Polynomial
from .scalar import PRECISION_ENV, default_precision, is_exact, real_context
from .sobolev import SobolevSpec, build_sequence, sobolev_inner

TABLE_COLUMNS = ("n", "k", "observed", "target", "abs_error")


# argument types ---------------------------------------------------------------------


def parse_rational(text: str) -> mpq:
    try:
        return mpq(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_masses(text: str) -> dict:
    """``"0:1,2:1/10"`` to ``{0: 1, 2: 1/10}``; an empty string means no masses."""
    out = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        order, sep, value = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected order:value, got {item!r}")
        try:
            key = int(order)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"derivative order must be an integer, got {order!r}") from exc
        if key in out:
            raise argparse.ArgumentTypeError(f"order {key} given twice")
        mass = parse_rational(value)
        if key < 0 or mass < 0:
            raise argparse.ArgumentTypeError(f"orders and masses must be nonnegative, got {item!r}")
        out[key] = mass
    return out


def parse_n_list(text: str) -> list:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("degrees must be positive integers")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError(f"degree list must be strictly increasing, got {text!r}")
    return values


def parse_point(text: str):
    """A rational (``1/2``, ``0.25``) or a complex number (``-1+2i``)."""
    t = text.strip().replace(" ", "")
    if t.endswith(("i", "j")):
        try:
            z = complex(t.replace("i", "j"))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
        return ("complex", z)
    return ("exact", parse_rational(t))


def parse_points(text: str) -> list:
    return [parse_point(p) for p in text.split(",") if p.strip()]


def parse_coeffs(text: str) -> Polynomial:
    return Polynomial([parse_rational(c) for c in text.split(",") if c.strip()])


def _precision(value: str) -> int:
    try:
        p = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"precision must be an integer number of bits, got {value!r}") from exc
    if p < 16:
        raise argparse.ArgumentTypeError("precision must be at least 16 bits")
    return p


# output ---------------------------------------------------------------------------


def format_value(value, precision: int) -> str:
    """Exact values as ``p/q``; reals with enough digits to round-trip at ``precision`` bits."""
    if value is None:
        return ""
    if isinstance(value, (int, bool)) or is_exact(value):
        return str(mpq(value))
    ctx = real_context(precision)
    digits = math.ceil(precision * math.log10(2)) + 1
    if isinstance(value, complex) or hasattr(value, "imag") and value.imag != 0:
        z = ctx.mpc(value)
        return f"{ctx.nstr(z.real, digits)}{'+' if z.imag >= 0 else '-'}{ctx.nstr(abs(z.imag), digits)}j"
    return ctx.nstr(ctx.mpf(value), digits)


def _point_value(point, precision):
    kind, value = point
    if kind == "exact":
        return value
    return real_context(precision + 16).mpc(value.real, value.imag)


def _point_label(point) -> str:
    kind, value = point
    return str(value) if kind == "exact" else f"{value.real:g}{value.imag:+g}j"


def emit(records: list, columns, meta: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump({"meta": meta, "records": records}, out, indent=2, ensure_ascii=False)
        out.write("\n")
        return
    writer = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec)


def rows_to_records(rows, precision: int, k=None) -> list:
    return [
        {
            "n": row.n,
            "k": row.k if k is None else k,
            "observed": format_value(row.observed, precision),
            "target": format_value(row.target, precision),
            "abs_error": format_value(row.abs_error, precision),
        }
        for row in rows
    ]


# commands -------------------------------------------------------------------------


class FlagError(ValueError):
    """A semantic argument error attributed to one flag."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"argument {flag}: {message}")


def _spec(args) -> SobolevSpec:
    masses = args.masses or {}
    if getattr(args, "mu", None) is not None:
        if args.alpha is not None:
            raise FlagError("--mu", "not allowed together with --alpha")
        try:
            return SobolevSpec.hermite(args.mu, masses)
        except ValueError as exc:
            raise FlagError("--mu", str(exc)) from exc
    try:
        return SobolevSpec.laguerre(args.alpha if args.alpha is not None else 0, masses)
    except ValueError as exc:
        raise FlagError("--alpha", str(exc)) from exc


def _shape_check(spec: SobolevSpec) -> None:
    try:
        if spec.kind == "hermite":
            if spec.hermite_r() is None:
                raise ValueError(f"Hermite tables need masses on orders 0..2r+1, got {spec.support}")
        else:
            asy.limit_shape(spec)
    except ValueError as exc:
        raise FlagError("--masses", str(exc)) from exc


def _off_support_points(points) -> None:
    for kind, value in points:
        if (kind == "exact" and value >= 0) or (kind == "complex" and value.imag == 0 and value.real >= 0):
            raise FlagError("--x", f"{_point_label((kind, value))} lies on [0, inf)")


def cmd_poly(args):
    spec = _spec(args)
    seq = build_sequence(spec, args.n)
    degrees = range(args.n + 1) if args.all else [args.n]
    records = [
        {"n": n, "coefficients": [str(c) for c in seq[n].coeffs], "norm": str(seq.norms[n])} for n in degrees
    ]
    if args.format == "csv":
        flat = [{"n": n, "k": k, "coefficient": str(c)} for n in degrees for k, c in enumerate(seq[n].coeffs)]
        return flat, ("n", "k", "coefficient"), spec
    return records, None, spec


def cmd_inner(args):
    spec = _spec(args)
    value = sobolev_inner(spec, args.p, args.q)
    return [{"value": str(value)}], ("value",), spec


def cmd_expand(args):
    spec = _spec(args)
    seq = build_sequence(spec, args.n)
    exp = con.expand_shifted(seq, args.n)
    records = [{"n": args.n, "j": j, "beta": str(exp.beta), "coefficient": str(c)} for j, c in enumerate(exp.coeffs)]
    return records, ("n", "j", "beta", "coefficient"), spec


def cmd_mh_table(args):
    spec = _spec(args)
    _shape_check(spec)
    p = args.precision
    records = []
    if spec.kind == "hermite":
        seq = build_sequence(spec, 2 * max(args.n) + 1)
        for k, point in enumerate(args.x):
            rows = asy.hermite_mh_table(seq, args.n, _point_value(point, p), args.j, args.parity, p)
            records += rows_to_records(rows, p, k)
    else:
        seq = build_sequence(spec, max(args.n))
        for k, point in enumerate(args.x):
            records += rows_to_records(asy.mh_table(seq, args.n, _point_value(point, p), args.j, p), p, k)
    return records, TABLE_COLUMNS, spec


def cmd_ratio_table(args):
    spec = _spec(args)
    p = args.precision
    q = args.quantity
    seq = build_sequence(spec, max(args.n))
    if q == "derivative":
        rows = asy.derivative_table(spec, args.k, args.n, seq, p)
    elif q == "connection":
        rows = con.connection_ratio_table(spec, args.k, args.n, seq, p)
    elif q == "norm":
        rows = con.norm_ratio_table(spec, args.n, seq, p)
    elif q == "a":
        rows = con.a_quantity_table(spec, args.k, args.n, seq, p)
    else:
        points = args.x or [("exact", mpq(-1))]
        _off_support_points(points)
        records = []
        for k, point in enumerate(points):
            records += rows_to_records(asy.relative_table(seq, args.n, _point_value(point, p), p), p, k)
        return records, TABLE_COLUMNS, spec
    return rows_to_records(rows, p), TABLE_COLUMNS, spec


def cmd_zeros_table(args):
    spec = _spec(args)
    _shape_check(spec)
    seq = build_sequence(spec, max(args.n))
    rows = zr.zero_scaling_table(seq, args.n, args.k_max, args.precision)
    return rows_to_records(rows, args.precision), TABLE_COLUMNS, spec


def cmd_classical_table(args):
    p = args.precision
    _off_support_points(args.x)
    records = []
    for point in args.x:
        rows = asy.classical_limit_checks(args.alpha if args.alpha is not None else 0, args.n, _point_value(point, p), p)
        records += rows_to_records(rows, p)
    return records, TABLE_COLUMNS, SobolevSpec.laguerre(args.alpha if args.alpha is not None else 0)


# parser ---------------------------------------------------------------------------


def _common(sp, spec=True):
    if spec:
        sp.add_argument("--alpha", type=parse_rational, help="Laguerre parameter (> -1); default 0")
        sp.add_argument("--mu", type=parse_rational, help="generalized Hermite parameter (> -1/2)")
        sp.add_argument("--masses", type=parse_masses, default={}, help="order:value pairs, e.g. 0:1,2:1/10")
    sp.add_argument(
        "--precision",
        type=_precision,
        default=None,
        help=f"working precision in bits (default ${PRECISION_ENV} or 128)",
    )
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagsobolev", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("poly", help="monic orthogonal polynomial coefficients (ascending)")
    _common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--all", action="store_true", help="emit every degree 0..n")
    sp.set_defaults(func=cmd_poly)

    sp = sub.add_parser("inner", help="exact Sobolev inner product of two polynomials")
    _common(sp)
    sp.add_argument("--p", type=parse_coeffs, required=True, help="ascending coefficients, comma separated")
    sp.add_argument("--q", type=parse_coeffs, required=True)
    sp.set_defaults(func=cmd_inner)

    sp = sub.add_parser("expand", help="connection coefficients over the shifted Laguerre basis")
    _common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("mh-table", help="Mehler-Heine convergence table")
    _common(sp)
    sp.add_argument("--x", type=parse_points, required=True)
    sp.add_argument("--n", type=parse_n_list, required=True)
    sp.add_argument("--j", type=int, default=0)
    sp.add_argument("--parity", choices=("even", "odd"), default="even", help="Hermite only")
    sp.set_defaults(func=cmd_mh_table)

    sp = sub.add_parser("ratio-table", help="derivative, connection, norm, A-quantity or relative ratios")
    _common(sp)
    sp.add_argument("--quantity", choices=("derivative", "connection", "norm", "a", "relative"), default="derivative")
    sp.add_argument("--k", type=int, default=0, help="derivative order / connection index")
    sp.add_argument("--x", type=parse_points, help="points off [0, inf) for --quantity relative")
    sp.add_argument("--n", type=parse_n_list, required=True)
    sp.set_defaults(func=cmd_ratio_table)

    sp = sub.add_parser("zeros-table", help="scaled zeros near the origin")
    _common(sp)
    sp.add_argument("--n", type=parse_n_list, required=True)
    sp.add_argument("--k-max", type=int, default=3)
    sp.set_defaults(func=cmd_zeros_table)

    sp = sub.add_parser("classical-table", help="classical Laguerre limit checks")
    _common(sp)
    sp.add_argument("--x", type=parse_points, default=[("exact", mpq(-1))])
    sp.add_argument("--n", type=parse_n_list, required=True)
    sp.set_defaults(func=cmd_classical_table)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--quick", action="store_true", help="exact identities at small degree only")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=None)
    return parser


def _open(path):
    if path:
        return open(path, "w", encoding="utf-8", newline="")
    return sys.stdout


def _verify(args) -> int:
    from .verify import run_suite

    out = _open(args.output)
    try:
        if args.format == "text":
            results = run_suite(quick=args.quick, report=lambda r: (out.write(r.line() + "\n"), out.flush()))
        else:
            results = run_suite(quick=args.quick)
            records = [
                {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
                for r in results
            ]
            meta = {"command": "verify", "tier": "quick" if args.quick else "full", "version": __version__}
            emit(records, None, meta, "json", out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if all(r.passed for r in results) else 1


_VALUE_FLAGS = ("--x", "--p", "--q", "--alpha", "--mu")


def _join_negative_values(argv: list) -> list:
    """Rewrite ``--x -1`` as ``--x=-1`` so negative numbers are not taken for options."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt and nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    if args.command == "verify":
        return _verify(args)
    if args.precision is None:
        try:
            args.precision = default_precision()
        except ValueError as exc:
            parser.error(f"${PRECISION_ENV}: {exc}")
    try:
        records, columns, spec = args.func(args)
    except (ValueError, ArithmeticError) as exc:
        parser.error(str(exc))
    meta = {
        "command": args.command,
        "spec": spec.describe(),
        "precision": args.precision,
        "version": __version__,
    }
    buffer = io.StringIO()
    emit(records, columns or ("n",), meta, args.format, buffer)
    out = _open(args.output)
    try:
        out.write(buffer.getvalue())
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
