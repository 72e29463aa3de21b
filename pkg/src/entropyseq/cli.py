"""Command-line interface: ``entropyseq {entropy,degree,approx,mesh,transform}``.

Reports are JSON on standard output (or ``--out``), with floats printed to
17 significant digits and complex numbers as ``[re, im]`` pairs.  Exit codes:
0 success, 2 usage or parse error, 3 numerical failure.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import approx, degree, differentials, surface
from .errors import ParseError
from .expr import evaluate, parse
from .registry import SURFACES, get_surface

SCHEMA = 1


# -- JSON -----------------------------------------------------------------------

def _fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    return "%.17g" % x


def dumps(obj, indent=0):
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_fmt_float(obj.real)}, {_fmt_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, complex, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- argument parsing helpers -------------------------------------------------------

def parse_complex(text):
    """Complex literal such as ``0.3+0.2i``, ``-1``, ``2i`` or ``pi``."""
    e = parse(text.replace("pi", repr(math.pi)))
    if "z" in str(e):
        raise ValueError(f"expected a number, got {text!r}")
    return complex(evaluate(e, 0j))


def parse_real(text):
    c = parse_complex(text)
    if c.imag != 0:
        raise ValueError(f"expected a real number, got {text!r}")
    return c.real


def parse_list(text, conv, count=None):
    items = [conv(s) for s in text.split(",") if s.strip()]
    if count is not None and len(items) != count:
        raise ValueError(f"expected {count} comma-separated values, got {text!r}")
    return items


def parse_grid(text):
    try:
        nx, ny = (int(s) for s in text.lower().split("x"))
    except ValueError:
        raise ValueError(f"grid must look like NXxNY, got {text!r}") from None
    if nx < 2 or ny < 2:
        raise ValueError("grid needs at least 2 points in each direction")
    return nx, ny


def parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"parameter must look like name=value, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = parse_real(val)
    return out


class Context:
    """Weierstrass data and chart defaults resolved from the command line."""

    def __init__(self, args):
        params = parse_params(args.param)
        if args.surface:
            if args.gauss or args.eta:
                raise ValueError("give either --surface or --gauss/--eta, not both")
            self.entry = get_surface(args.surface)
            self.W = self.entry.data(params)
            self.params = self.entry.resolve(params)
            self.name = args.surface
        else:
            if not (args.gauss and args.eta):
                raise ValueError("need --surface or both --gauss and --eta")
            if params:
                raise ValueError("--param only applies to registry surfaces")
            self.entry = None
            self.W = differentials.WeierstrassData.from_text(args.gauss, args.eta, "custom")
            self.params = {}
            self.name = None
        self.base = parse_complex(args.base) if args.base is not None else (
            self.entry.base if self.entry else 0j)

    @property
    def rect(self):
        return self.entry.rect if self.entry else (-0.5, -0.5, 0.5, 0.5)

    def header(self, command):
        return {
            "schema": SCHEMA,
            "command": command,
            "surface": self.name,
            "params": {k: v for k, v in sorted(self.params.items())},
            "gauss": self.W.gauss_text,
            "eta": self.W.eta_text,
        }


def _series_report(s):
    zero = s.is_zero()
    t = s.tight()
    return {
        "declared_zero": zero,
        "valuation": None if zero else t.valuation,
        "precision": s.prec,
        "coefficients": [] if zero else [complex(c) for c in t.coeffs],
    }


# -- commands -----------------------------------------------------------------------

def cmd_entropy(args):
    ctx = Context(args)
    if args.max_ell < 2:
        raise ValueError("--max-ell must be >= 2")
    seq = differentials.entropy_sequence(ctx.W, ctx.base, args.max_ell, args.order)
    q = differentials.hopf(ctx.W, ctx.base, args.order)
    out = ctx.header("entropy")
    out.update({"base": ctx.base, "order": args.order,
                "hopf": _series_report(q.s),
                "umbilic_order": differentials.umbilic_order(q.s.tight())})
    rows = []
    for P in seq:
        row = {"ell": P.ell}
        row.update(_series_report(P.s))
        row["residue"] = differentials.residue(P)
        rows.append(row)
    out["differentials"] = rows
    return out


def cmd_degree(args):
    ctx = Context(args)
    rect = tuple(parse_list(args.rect, parse_real, 4)) if args.rect else ctx.rect
    if args.base_points:
        pts = parse_list(args.base_points, parse_complex)
    else:
        pts = degree.select_base_points(ctx.W, rect)
    T = degree.detect_degree(ctx.W, pts, args.max_degree, args.order, args.tol)
    out = ctx.header("degree")
    out.update({
        "degree": T.n,
        "relation": T.to_text(),
        "terms": [{"monomial": degree.monomial_text(a), "exponents": list(a), "coefficient": c}
                  for a, c in T.terms],
        "residual": T.residual,
        "condition": T.condition,
        "base_points": list(T.base_points),
    })
    return out


def cmd_approx(args):
    ctx = Context(args)
    ns = parse_list(args.n, int)
    if args.rect:
        x0, y0, x1, y1 = parse_list(args.rect, parse_real, 4)
        nx, ny = parse_grid(args.grid)
        grid = surface.RectGrid(x0, y0, x1, y1, nx, ny)
    else:
        grid = surface.DiskGrid(args.radius, 10, 24)
    reports = approx.convergence_report(ctx.W, ctx.base, ns, grid, args.order)
    out = ctx.header("approx")
    out.update({
        "base": ctx.base,
        "order": args.order,
        "grid": grid.__class__.__name__,
        "reports": [{"n": r.n, "sup_error": r.sup_error, "p_n_norm": r.p_n_norm,
                     "declared_zero": r.p_n_norm <= 1e-10} for r in reports],
    })
    return out


def cmd_mesh(args):
    ctx = Context(args)
    if not args.out:
        raise ValueError("mesh needs --out PATH")
    rect = tuple(parse_list(args.rect, parse_real, 4)) if args.rect else ctx.rect
    nx, ny = parse_grid(args.grid)
    theta = args.theta if args.theta is not None else (ctx.entry.theta if ctx.entry else 0.0)
    x_base = (0.0, 0.0, 0.0)
    if ctx.entry is not None and theta == ctx.entry.theta:
        x_base = ctx.entry.base_value(ctx.params)
    S = surface.integrate_immersion(ctx.W, ctx.base, surface.RectGrid(*rect, nx, ny), theta, x_base)
    surface.export_mesh(S, args.out)
    out = ctx.header("mesh")
    out.update({"path": args.out, "vertices": nx * ny, "faces": (nx - 1) * (ny - 1),
                "rect": list(rect), "theta": theta})
    return out


def _relative_gap(seq_a, seq_b):
    """Worst coefficient gap, each against its rounding magnitude (floored at 1)."""
    worst = 0.0
    for A, B in zip(seq_a, seq_b):
        lo = min(A.s.valuation, B.s.valuation)
        hi = min(A.s.prec, B.s.prec)
        a, b = A.s.padded(lo, hi), B.s.padded(lo, hi)
        ref = np.maximum(1.0, A.s.padded_mags(lo, hi) + B.s.padded_mags(lo, hi))
        worst = max(worst, float(np.max(np.abs(a - b) / ref, initial=0.0)))
    return worst


def cmd_transform(args):
    ctx = Context(args)
    W2 = ctx.W
    applied = []
    if args.goursat:
        m = surface.MoebiusMap.normalized(*parse_list(args.goursat, parse_complex, 4))
        W2 = surface.goursat_transform(W2, m)
        applied.append({"goursat": [m.a, m.b, m.c, m.d]})
    if args.bonnet is not None or args.scale is not None:
        c = args.scale if args.scale is not None else 1.0
        theta = args.bonnet if args.bonnet is not None else 0.0
        W2 = surface.scale_and_bonnet(W2, c, theta)
        applied.append({"scale": c, "bonnet": theta})
    before = differentials.entropy_sequence(ctx.W, ctx.base, args.max_ell, args.order)
    after = differentials.entropy_sequence(W2, ctx.base, args.max_ell, args.order)
    out = ctx.header("transform")
    out.update({
        "base": ctx.base,
        "applied": applied,
        "new_gauss": W2.gauss_text,
        "new_eta": W2.eta_text,
        "invariance_residual": _relative_gap(before, after),
    })
    return out


# -- parser ---------------------------------------------------------------------------

def _add_data_args(p):
    p.add_argument("--surface", choices=sorted(SURFACES), help="registry surface")
    p.add_argument("--gauss", help="Gauss map G(z) as an expression")
    p.add_argument("--eta", help="h(z) with eta = h dz")
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="registry parameter, e.g. k=3 (repeatable)")
    p.add_argument("--base", help="base point, e.g. 0.3+0.2i")
    p.add_argument("--out", help="write the report (or mesh) to this path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entropyseq",
        description="Entropy differentials of minimal surfaces from Weierstrass data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="entropy differentials P_2..P_l at a base point")
    _add_data_args(p)
    p.add_argument("--max-ell", type=int, default=5)
    p.add_argument("--order", type=int, default=12)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("degree", help="detect degree and algebraic type")
    _add_data_args(p)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--order", type=int, default=24)
    p.add_argument("--tol", type=float, default=degree.DEFAULT_TOL)
    p.add_argument("--rect", help="x0,y0,x1,y1 for base-point selection")
    p.add_argument("--base-points", help="comma-separated base points (skips selection)")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("approx", help="degree-n approximants and their errors")
    _add_data_args(p)
    p.add_argument("--n", default="4,6,8,10", help="comma-separated degrees")
    p.add_argument("--radius", type=float, default=0.3, help="disk radius in the adapted chart")
    p.add_argument("--rect", help="x0,y0,x1,y1 rectangle in the adapted chart (instead of a disk)")
    p.add_argument("--grid", default="11x11")
    p.add_argument("--order", type=int, default=32)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("mesh", help="sample the immersion and write a Wavefront OBJ")
    _add_data_args(p)
    p.add_argument("--rect", help="x0,y0,x1,y1 (pi allowed)")
    p.add_argument("--grid", default="40x40", help="NXxNY")
    p.add_argument("--theta", type=float, help="Bonnet phase")
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("transform", help="Goursat/Bonnet/scaling transform and invariance check")
    _add_data_args(p)
    p.add_argument("--goursat", help="a,b,c,d of a Moebius map (normalized to det 1)")
    p.add_argument("--bonnet", type=float, help="associated-family phase theta")
    p.add_argument("--scale", type=float, help="scale factor c > 0")
    p.add_argument("--max-ell", type=int, default=5)
    p.add_argument("--order", type=int, default=12)
    p.set_defaults(func=cmd_transform)
    return parser


_VALUE_FLAGS = {"--rect", "--base", "--base-points", "--goursat", "--bonnet", "--theta", "--scale"}


def _glue_negative_values(argv):
    """Turn ``--rect -2,-3`` into ``--rect=-2,-3`` so argparse does not read a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.func(args)
    except (ValueError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = dumps(report) + "\n"
    if args.out and args.command != "mesh":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
