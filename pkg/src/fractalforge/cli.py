"""Command-line front end.

Subcommands: eval (analytic report), construct (target-dimension builders),
cover (stage covers as CSV), boxdim (log-log fit table), verify (invariant
suite), render (2-D covers as binary PGM).

Exit codes: 0 success, 1 verify FAIL, 2 parse/semantic/range errors,
3 infeasible targets, 4 resource caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .boxdim import CELL_CAP, box_dim_fit, verify
from .build import (
    ConstructionRequest,
    default_index_sets,
    lemma31,
    lemma32,
    lemma33,
    nonfractal_family,
    thm34,
)
from .calculus import is_fractal
from .errors import (
    CapExceeded,
    FractalForgeError,
    FrxSemanticError,
    FrxSyntaxError,
    Infeasible,
)
from .expr import SetExpr, expr_bbox, expr_stage_cover
from .frx import _Parser, emit_frx, parse_frx
from .indexset import IndexSet
from .scalars import (
    Scalar,
    canon_value,
    floor_ratio,
    fmt_exact,
    is_rational,
    scalar_cmp,
    to_decimal,
    to_float,
)

CSV_DECIMAL_DIGITS = 50


def _parse_scalar_arg(text: str) -> Scalar:
    parser = _Parser(text)
    value = parser.parse_scalar()
    if parser.peek().kind != "EOF":
        parser.fail("end of value")
    return value


def _parse_index_arg(text: str) -> IndexSet:
    parser = _Parser(text)
    idx = parser.parse_indexset()
    if parser.peek().kind != "EOF":
        parser.fail("end of index set")
    return idx


def _parse_stages(text: str) -> list[int]:
    if ".." in text:
        a, _, b = text.partition("..")
        lo, hi = int(a), int(b)
        if hi < lo:
            raise FrxSemanticError(f"empty stage range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _load_expr(path: str) -> SetExpr:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_frx(fh.read())


def _csv_scalar(x: Scalar) -> str:
    if is_rational(x):
        return fmt_exact(x)
    return str(to_decimal(x, CSV_DECIMAL_DIGITS))


def _scalar_payload(x: Scalar) -> dict:
    return {"exact": fmt_exact(x), "float": to_float(x)}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_eval(args) -> int:
    expr = _load_expr(args.file)
    report = is_fractal(expr)
    if args.report == "json":
        payload = {
            "hausdorff_dim": _scalar_payload(report.hausdorff_dim),
            "inductive_dim": report.inductive_dim,
            "measure": _scalar_payload(report.lebesgue_measure),
            "fractal": report.is_fractal,
            "trace": list(report.trace),
        }
        print(json.dumps(payload, indent=2))
    else:
        print(
            f"hausdorff_dim: {fmt_exact(report.hausdorff_dim)}"
            f" ~ {to_float(report.hausdorff_dim):.12f}"
        )
        print(f"inductive_dim: {report.inductive_dim}")
        print(
            f"measure: {fmt_exact(report.lebesgue_measure)}"
            f" ~ {to_float(report.lebesgue_measure):.12f}"
        )
        print(f"fractal: {'true' if report.is_fractal else 'false'}")
        print("trace:")
        for line in report.trace:
            print(f"  {line}")
    return 0


def _cmd_construct(args) -> int:
    if args.which != "nonfractal" and args.r is None:
        raise FrxSemanticError("--r is required for this constructor")
    r = _parse_scalar_arg(args.r) if args.r is not None else None
    l = _parse_scalar_arg(args.l)
    indices = tuple(_parse_index_arg(s) for s in args.index) if args.index else None
    if args.which == "lemma31":
        expr = lemma31(r, l, s0=args.s0, truncation=args.truncate)
    elif args.which == "lemma32":
        index = indices[0] if indices else default_index_sets(l, 1)[0]
        expr = lemma32(r, l, index, truncation=args.truncate)
    elif args.which == "lemma33":
        expr = lemma33(r, l, args.n, indices, truncation=args.truncate)
    elif args.which == "thm34":
        request = ConstructionRequest(
            r=r,
            l=l,
            n=args.n,
            s0=args.s0,
            index_sets=indices,
            prune_seed=args.seed,
            truncation=args.truncate,
        )
        expr = thm34(request)
    else:
        expr = nonfractal_family(args.n, args.seed)
    with open(args.emit, "w", encoding="utf-8") as fh:
        fh.write(emit_frx(expr) + "\n")
    return 0


def _cmd_cover(args) -> int:
    expr = _load_expr(args.file)
    cover = expr_stage_cover(expr, args.stage)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        header = []
        for j in range(cover.ndim):
            header += [f"ax{j}_lo", f"ax{j}_hi"]
        fh.write(",".join(header) + "\n")
        for box in cover.boxes:
            row = []
            for iv in box:
                row += [_csv_scalar(iv.lo), _csv_scalar(iv.hi)]
            fh.write(",".join(row) + "\n")
    return 0


def _cmd_boxdim(args) -> int:
    expr = _load_expr(args.file)
    stages = _parse_stages(args.stages)
    fit = box_dim_fit(expr, stages, grid_mode=args.grid)
    print(f"{'stage':>5}  {'log(1/eps)':>14}  {'log N':>14}  {'ratio':>10}")
    for k, (x, y) in zip(fit.stages, fit.points):
        print(f"{k:>5}  {x:>14.8f}  {y:>14.8f}  {y / x:>10.6f}")
    print(f"slope: {fit.slope:.12f}")
    print(f"residual: {fit.residual:.3e}")
    return 0


def _cmd_verify(args) -> int:
    expr = _load_expr(args.file)
    stages = _parse_stages(args.stages)
    report = verify(expr, stages, tolerance=args.tol)
    for entry in report.entries:
        status = "PASS" if entry.passed else "FAIL"
        print(f"{status} {entry.name}: {entry.detail}")
    if not report.passed:
        print("verdict: FAIL")
        return 1
    print("verdict: PASS")
    return 0


def _cmd_render(args) -> int:
    expr = _load_expr(args.file)
    if expr.ndim != 2:
        raise FrxSemanticError(
            f"render needs a 2-D expression, got {expr.ndim}-D"
        )
    res = args.resolution
    if res < 1:
        raise FrxSemanticError("resolution must be >= 1")
    if res * res > CELL_CAP:
        raise CapExceeded(f"{res}x{res} pixels exceed the cell cap {CELL_CAP}")
    cover = expr_stage_cover(expr, args.stage)
    bbox = expr_bbox(expr)
    (xlo, xhi), (ylo, yhi) = (bbox[0].lo, bbox[0].hi), (bbox[1].lo, bbox[1].hi)
    width = xhi - xlo
    height = yhi - ylo
    pixels = bytearray(b"\xff" * (res * res))
    for box in cover.boxes:
        cols = _pixel_range(box[0].lo, box[0].hi, xlo, width, res)
        rows_up = _pixel_range(box[1].lo, box[1].hi, ylo, height, res)
        for j in rows_up:
            row = res - 1 - j
            base = row * res
            for i in cols:
                pixels[base + i] = 0
    with open(args.out, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (res, res))
        fh.write(bytes(pixels))
    return 0


def _pixel_range(lo: Scalar, hi: Scalar, origin: Scalar, extent: Scalar, res: int) -> range:
    # pixel cell i covers [origin + i*extent/res, origin + (i+1)*extent/res];
    # dark iff interiors overlap, i.e. i*extent/res < hi-origin and
    # (i+1)*extent/res > lo-origin, all exact
    step_num = extent  # cell side = extent / res
    a = canon_value((lo - origin) * res)
    b = canon_value((hi - origin) * res)
    i_min = floor_ratio(a, step_num)
    q = floor_ratio(b, step_num)
    if scalar_cmp(b, canon_value(q * step_num)) == 0:
        q -= 1
    i_min = max(0, i_min)
    q = min(res - 1, q)
    return range(i_min, q + 1)


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="fractalforge",
        description="construct, analyze, and verify explicit fractal sets",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="analytic dimension/measure report")
    p.add_argument("file")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("construct", help="build a set with target dim/measure")
    p.add_argument(
        "which",
        choices=("lemma31", "lemma32", "lemma33", "thm34", "nonfractal"),
    )
    p.add_argument("--r", default=None, help="target dimension (exact, e.g. 3/2)")
    p.add_argument("--l", default="0", help="target measure (exact, e.g. 1/2)")
    p.add_argument("--n", type=int, default=1, help="ambient dimension")
    p.add_argument("--s0", type=int, default=1, help="primitive order")
    p.add_argument(
        "--index",
        action="append",
        default=None,
        help="index set, e.g. '{1,3,5; period=01}' (repeat per axis)",
    )
    p.add_argument("--seed", type=int, default=0, help="pruning seed")
    p.add_argument("--truncate", type=int, default=8, help="indexed-union depth")
    p.add_argument("--emit", required=True, help="output .frx path")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("cover", help="stage cover as CSV")
    p.add_argument("file")
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("boxdim", help="box-counting dimension fit")
    p.add_argument("file")
    p.add_argument("--stages", required=True, help="A..B inclusive")
    p.add_argument("--grid", choices=("natural", "dyadic"), default="natural")
    p.set_defaults(func=_cmd_boxdim)

    p = sub.add_parser("verify", help="invariant suite over stage covers")
    p.add_argument("file")
    p.add_argument("--stages", required=True, help="A..B inclusive")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render", help="2-D cover as binary PGM")
    p.add_argument("file")
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_render)

    return top


def cli_main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FrxSyntaxError, FrxSemanticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Infeasible as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except FractalForgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main(argv: Optional[list[str]] = None) -> int:
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
