"""Command-line front end.

One subcommand per core operation plus `verify` for the acceptance suites.
Output is a stream of line-delimited JSON objects or CSV with a header row;
rationals print as "p/q" and integers beyond double precision as decimal
strings, so every record parses back losslessly.  Exit codes: 0 success,
1 failed verification, 2 malformed input.  Boundary-ambiguous evaluations
(float mode only) are reported on stderr and never counted as members.

Window scans can be partitioned with --workers; the partitions are merged
in ascending n order, so output is byte-identical for any worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import dynsim, gp, nilmatrix, setfamilies, verify
from .windows import WindowSet, merge_adjacent


def _parse_number(text: str, arith: str):
    if arith == "float":
        return float(text)
    return Fraction(text)  # accepts "3/7", "0.25", "5"


def _parse_number_list(text: str, arith: str) -> list:
    return [_parse_number(t, arith) for t in text.split(",") if t.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v) if abs(v) >= 2 ** 53 else v
    if isinstance(v, float):
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _csv_cell(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return ";".join(str(_csv_cell(x)) for x in v)
    return v


def emit(records, fmt: str, out=None) -> None:
    """Serialize a stream of flat records; JSON is line-delimited objects,
    CSV carries a header row."""
    out = out or sys.stdout
    records = list(records)
    if fmt == "json":
        for rec in records:
            out.write(json.dumps(_jsonable(rec)) + "\n")
        return
    if not records:
        return
    writer = csv.writer(out, lineterminator="\n")
    header = list(records[0].keys())
    writer.writerow(header)
    for rec in records:
        writer.writerow([_csv_cell(rec[k]) for k in header])


def _report_boundary(ws: WindowSet) -> None:
    if ws.boundary:
        print(f"boundary-ambiguous n: {list(ws.boundary)}", file=sys.stderr)


def _windowset_records(ws: WindowSet, fmt: str) -> list[dict]:
    _report_boundary(ws)
    if fmt == "csv":
        return [{"n": n} for n in ws.members]
    return [ws.to_json()]


def _partition(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    total = hi - lo + 1
    parts = max(1, min(parts, total))
    size = total // parts
    extra = total % parts
    spans = []
    start = lo
    for p in range(parts):
        end = start + size - 1 + (1 if p < extra else 0)
        spans.append((start, end))
        start = end + 1
    return spans


def _scan_partitioned(scan, window: tuple[int, int], workers: int) -> WindowSet:
    """Run a WindowSet-producing scan over subwindows and merge in order."""
    spans = _partition(window[0], window[1], workers)
    if len(spans) == 1:
        return scan(spans[0])
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        pieces = list(pool.map(scan, spans))
    return merge_adjacent(pieces)


def _parse_expr(text: str, arith: str) -> gp.GPExpr:
    """Either the shorthand lin:A or a JSON expression tree."""
    if text.startswith("lin:"):
        return gp.Linear(_parse_number(text[4:], arith))
    expr = gp.gp_from_json(json.loads(text))
    if arith == "float":
        expr = _expr_to_float(expr)
    return expr


def _expr_to_float(e: gp.GPExpr) -> gp.GPExpr:
    if isinstance(e, gp.Linear):
        return gp.Linear(float(e.a))
    if isinstance(e, gp.Sum):
        return gp.Sum(tuple(_expr_to_float(c) for c in e.children))
    if isinstance(e, gp.Scale):
        return gp.Scale(float(e.c), _expr_to_float(e.child))
    if isinstance(e, gp.Round):
        return gp.Round(_expr_to_float(e.child))
    return gp.Monomial(float(e.a0), e.p0, tuple(_expr_to_float(f) for f in e.factors))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_gp_eval(args) -> int:
    expr = _parse_expr(args.expr, args.arith)
    if args.n is None and args.window is None:
        raise ValueError("gp-eval needs --n or --window")
    ns = [args.n] if args.n is not None else list(range(args.window[0], args.window[1] + 1))
    records = []
    for n in ns:
        try:
            records.append({"n": n, "value": gp.gp_eval(expr, n, args.tie_guard)})
        except gp.BoundaryAmbiguous:
            print(f"boundary-ambiguous n: [{n}]", file=sys.stderr)
    emit(records, args.format)
    return 0


def _cmd_bohr(args) -> int:
    if len(args.eps) not in (1, len(args.expr)):
        raise ValueError("give one --eps per --expr, or a single shared --eps")
    epss = args.eps * len(args.expr) if len(args.eps) == 1 else args.eps
    exprs = [_parse_expr(t, args.arith) for t in args.expr]
    eps_vals = [_parse_number(e, args.arith) for e in epss]

    def scan(span):
        spec = gp.BohrSpec(tuple(zip(exprs, eps_vals)), span)
        return gp.bohr_window(spec, args.tie_guard)

    ws = _scan_partitioned(scan, tuple(args.window), args.workers)
    emit(_windowset_records(ws, args.format), args.format)
    return 0


def _cmd_nil_return(args) -> int:
    alphas = _parse_number_list(args.alphas, args.arith)
    eta = _parse_number(args.eta, args.arith)

    def scan(span):
        return nilmatrix.nil_return_set(alphas, eta, span, args.tie_guard)

    ws = _scan_partitioned(scan, tuple(args.window), args.workers)
    emit(_windowset_records(ws, args.format), args.format)
    return 0


def _cmd_z1d(args) -> int:
    alphas = _parse_number_list(args.alphas, args.arith)
    seq = nilmatrix.z1d_sequence(alphas, tuple(args.window), args.tie_guard)
    emit(({"n": n, "value": v} for n, v in seq), args.format)
    return 0


def _cmd_sgd(args) -> int:
    terms = _parse_int_list(args.terms)
    values = setfamilies.sg_d(terms, args.d)
    emit([{"d": args.d, "terms": terms, "values": values}], args.format)
    return 0


def _cmd_fs(args) -> int:
    terms = _parse_int_list(args.terms)
    emit([{"terms": terms, "values": setfamilies.fs(terms)}], args.format)
    return 0


def _members_arg(args) -> WindowSet:
    lo, hi = args.window
    return WindowSet(lo, hi, tuple(sorted(set(_parse_int_list(args.members)))))


def _cmd_cdiff(args) -> int:
    ws = setfamilies.common_diff_set(_members_arg(args), args.d)
    emit(_windowset_records(ws, args.format), args.format)
    return 0


def _cmd_syndetic(args) -> int:
    s = _members_arg(args)
    result = setfamilies.is_syndetic_window(s, args.gap)
    emit([{"window": list(args.window), "N": args.gap, "syndetic": result}],
         args.format)
    return 0


def _cmd_density(args) -> int:
    s = _members_arg(args)
    val = setfamilies.banach_upper_density(s, args.block)
    emit([{"window": list(args.window), "block": args.block, "density": val}],
         args.format)
    return 0


def _cmd_intersect(args) -> int:
    lo, hi = args.window
    p = WindowSet(lo, hi, tuple(sorted(set(_parse_int_list(args.p_members)))))
    f = WindowSet(lo, hi, tuple(sorted(set(_parse_int_list(args.f_members)))))
    hit = setfamilies.intersective_witness(p, f, args.d, args.bound)
    if hit is None:
        emit([{"found": False}], args.format)
    else:
        a, ns = hit
        emit([{"found": True, "a": a, "ns": list(ns)}], args.format)
    return 0


def _cmd_ramsey_check(args) -> int:
    terms = _parse_int_list(args.terms)
    b0, b1, b2 = setfamilies.ramsey_sg2_partition(terms)

    def star(block):
        hit = setfamilies.find_star_pattern(block)
        return {"found": hit is not None,
                "triple": list(hit) if hit else None}

    whole = setfamilies.sg_d(terms, 2)
    emit([{
        "lacunary": True,
        "B0": {"size": len(b0), "star": star(b0)},
        "B1": {"size": len(b1), "star": star(b1)},
        "B2": {"size": len(b2), "star": star(b2)},
        "whole": {"size": len(whole), "star": star(whole)},
    }], args.format)
    return 0


def _cmd_torus_return(args) -> int:
    alpha = _parse_number(args.alpha, args.arith)
    sys_ = dynsim.TorusSystem(args.d, alpha)
    x0 = dynsim.TorusState(tuple(_parse_number_list(args.x0, args.arith))) \
        if args.x0 else dynsim.zero_state(args.d)
    box = _box_arg(args)

    def scan(span):
        return dynsim.return_set(sys_, x0, box, span)

    ws = _scan_partitioned(scan, tuple(args.window), args.workers)
    emit(_windowset_records(ws, args.format), args.format)
    return 0


def _box_arg(args) -> dynsim.BoxNbhd:
    center = dynsim.TorusState(tuple(_parse_number_list(args.center, args.arith))) \
        if args.center else dynsim.zero_state(args.d)
    if args.radii:
        radii = _parse_number_list(args.radii, args.arith)
    elif args.eps:
        radii = [_parse_number(args.eps[0], args.arith)] * args.d
    else:
        raise ValueError("give --radii or --eps for the box neighbourhood")
    return dynsim.BoxNbhd(center, tuple(radii))


def _cmd_multi_return(args) -> int:
    alpha = _parse_number(args.alpha, args.arith)
    sys_ = dynsim.TorusSystem(args.d, alpha)
    box = _box_arg(args)
    pairs = dynsim.multi_return_scan(sys_, box, args.d_rec, tuple(args.window),
                                     args.grid)
    lo, hi = args.window
    ws = WindowSet(lo, hi, tuple(n for n, _ in pairs))
    if args.format == "csv":
        emit(({"n": n} for n, _ in pairs), args.format)
    else:
        rec = ws.to_json()
        rec["witnesses"] = [[n, [c for c in w.coords]] for n, w in pairs]
        emit([rec], args.format)
    return 0


def _cmd_lambda(args) -> int:
    sol = dynsim.vandermonde_lambda(args.d)
    emit([sol.to_json()], args.format)
    return 0


def _cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, args.seed)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arith", choices=("exact", "float"), default="exact",
                        help="exact rationals (default) or guarded float64")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    common.add_argument("--tie-guard", type=float, default=gp.DEFAULT_TIE_GUARD,
                        help="half-integer guard radius in float mode")
    common.add_argument("--workers", type=int, default=1,
                        help="partition window scans; output is identical "
                             "for any value")

    p = argparse.ArgumentParser(
        prog="nilbohr",
        description="Windowed computations with nil Bohr sets, generalized "
                    "polynomials, unipotent matrix groups, sums-with-gaps "
                    "families, and torus skew products.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, window=False, **kw):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        if window:
            sp.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"),
                            required=kw.pop("window_required", True))
        return sp

    sp = add("gp-eval", _cmd_gp_eval, "evaluate a generalized polynomial",
             window=True, window_required=False)
    sp.add_argument("--expr", required=True,
                    help="lin:A shorthand or a JSON expression tree")
    sp.add_argument("--n", type=int)

    sp = add("bohr", _cmd_bohr, "windowed generalized-polynomial Bohr set",
             window=True)
    sp.add_argument("--expr", action="append", required=True)
    sp.add_argument("--eps", action="append", required=True)

    sp = add("nil-return", _cmd_nil_return,
             "return times of the unipotent nilrotation", window=True)
    sp.add_argument("--alphas", required=True, help="comma-separated")
    sp.add_argument("--eta", required=True)

    sp = add("z1d", _cmd_z1d, "top-right reduction residual per n", window=True)
    sp.add_argument("--alphas", required=True)

    sp = add("sgd", _cmd_sgd, "sums with gaps < d")
    sp.add_argument("--terms", required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = add("fs", _cmd_fs, "finite subset sums")
    sp.add_argument("--terms", required=True)

    sp = add("cdiff", _cmd_cdiff, "common differences of progressions in S",
             window=True)
    sp.add_argument("--members", required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = add("syndetic", _cmd_syndetic, "windowed syndeticity test", window=True)
    sp.add_argument("--members", required=True)
    sp.add_argument("--gap", type=int, required=True, metavar="N",
                    help="every block {i..i+N} must meet the set")

    sp = add("density", _cmd_density, "windowed upper Banach density",
             window=True)
    sp.add_argument("--members", required=True)
    sp.add_argument("--block", type=int, required=True)

    sp = add("intersect", _cmd_intersect,
             "bounded order-d intersectivity witness search", window=True)
    sp.add_argument("--p-members", required=True)
    sp.add_argument("--f-members", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)

    sp = add("ramsey-check", _cmd_ramsey_check,
             "three-block partition of gap-2 sums and star-triple search")
    sp.add_argument("--terms", required=True, help="lacunary sequence")

    sp = add("torus-return", _cmd_torus_return,
             "return times of the torus skew product", window=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--x0", help="comma-separated start point, default 0")
    sp.add_argument("--center", help="box center, default 0")
    sp.add_argument("--radii", help="comma-separated box radii")
    sp.add_argument("--eps", action="append", default=[],
                    help="uniform box radius (alternative to --radii)")

    sp = add("multi-return", _cmd_multi_return,
             "grid-certified multi-return set", window=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--d-rec", type=int, required=True)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--center")
    sp.add_argument("--radii")
    sp.add_argument("--eps", action="append", default=[])

    sp = add("lambda", _cmd_lambda, "integer weights of the power-sum system")
    sp.add_argument("--d", type=int, required=True)

    sp = add("verify", _cmd_verify, "run a named verification suite")
    sp.add_argument("suite", nargs="?", default="all",
                    help=f"one of: all, {', '.join(verify.SUITES)}")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
