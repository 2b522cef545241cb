"""Command-line entry point: ``coxdeform <subcommand> ...``."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path

from . import catalog, classify, deformation, orderability, polytope, vinberg


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _range(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")
    a, b = _fraction(lo), _fraction(hi)
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _existing(text: str) -> Path:
    p = Path(text)
    if not p.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="coxdeform", description="Orderability, Coxeter data and deformation fibers of labeled 3-polytopes.")
    ap.add_argument("--machine", action="store_true", help="one tab-separated record per line")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("census", help="orderable binary labelings per facet count")
    c.add_argument("--max-facets", type=int, default=7)
    c.add_argument("--workers", type=_positive, default=1)

    e = sub.add_parser("enumerate", help="list the combinatorial polytopes with f facets")
    e.add_argument("--facets", type=int, required=True)
    e.add_argument("--out", type=Path, help="write one .poly file per polytope here")

    for name, text in (("orderable", "find an ordering certificate"),
                       ("normal-type", "decide the normal-type verdict"),
                       ("classify", "classify the Coxeter graph components"),
                       ("dims", "dimension formulas")):
        s = sub.add_parser(name, help=text)
        s.add_argument("polytope", type=_existing)

    v = sub.add_parser("vinberg-check", help="report conditions V1-V6 for a reflection system")
    v.add_argument("polytope", type=_existing)
    v.add_argument("system", type=_existing)

    f = sub.add_parser("fiber", help="symbolic w-vectors of a worked example")
    f.add_argument("--example", choices=("7.1", "7.2"), required=True)

    s = sub.add_parser("scan", help="component counts of the fibers along a path")
    s.add_argument("--example", choices=("7.1", "7.2"), required=True)
    s.add_argument("--path", help="path parameter (d for 7.1, s for 7.2)")
    s.add_argument("--range", type=_range, required=True, dest="range_")
    s.add_argument("--steps", type=_positive, default=200, help="samples along the path")
    s.add_argument("--fiber-range", type=_range, help="bracket for the fiber parameter")
    s.add_argument("--resolution", type=_positive, default=2000, help="grid points in the fiber parameter")
    s.add_argument("--grid", action="store_true",
                   help="count components on the grid instead of from exact intervals")
    s.add_argument("--tol", type=_fraction, default=Fraction(1, 10**7), help="transition tolerance")
    s.add_argument("--workers", type=_positive, default=1)
    return ap


def _ratio(a: int, b: int) -> str:
    """Exact quotient rounded half-up to six places, as census tables print it."""
    q = (Decimal(a) / Decimal(b)).quantize(Decimal("0.000001"), rounding=ROUND_HALF_UP)
    return f"{q:.6f}"


def cmd_census(args, out):
    if not catalog.MIN_FACETS <= args.max_facets <= catalog.MAX_FACETS:
        raise UsageError(f"--max-facets must be in [{catalog.MIN_FACETS}, {catalog.MAX_FACETS}]")
    if not args.machine:
        out("f orderable total ratio")
    for f, good, total, _ in orderability.census_table(args.max_facets, workers=args.workers):
        if args.machine:
            out(f"census\t{f}\t{good}\t{total}\t{_ratio(good, total)}")
        else:
            out(f"{f} {good} {total} {_ratio(good, total)}")


def cmd_enumerate(args, out):
    polys = catalog.enumerate_polytopes(args.facets)
    if args.out:
        catalog.write_catalog(polys, args.out)
    for p in polys:
        code = polytope.canonical_code(p)
        if args.machine:
            out(f"polytope\t{p.f}\t{p.e}\t{len(p.vertices)}\t{code}")
        else:
            out(f"{code}  f={p.f} e={p.e} v={len(p.vertices)}")
    if not args.machine:
        out(f"{len(polys)} polytopes, {sum(2 ** p.e for p in polys)} binary labelings")


def cmd_orderable(args, out):
    p = polytope.read_polytope(args.polytope)
    cert = orderability.is_orderable(p)
    if cert is None:
        out("orderable\tfalse" if args.machine else "NOT ORDERABLE")
        return
    order = " ".join(map(str, cert.order))
    out(f"orderable\ttrue\t{order}" if args.machine else f"ORDERABLE order: {order}")


def cmd_normal_type(args, out):
    v = classify.normal_type(polytope.read_polytope(args.polytope))
    if args.machine:
        out(f"normal-type\t{v.verdict}\t{v.reason or '-'}")
    else:
        out(str(v))


def cmd_classify(args, out):
    p = polytope.read_polytope(args.polytope)
    for nodes, kind in classify.classify_components(p):
        ids = ",".join(map(str, nodes))
        out(f"component\t{ids}\t{kind.value}" if args.machine else f"{{{ids}}} {kind.value}")


def cmd_dims(args, out):
    p = polytope.read_polytope(args.polytope)
    dc, drs, dres = deformation.dims(p)
    if args.machine:
        out(f"dims\t{dc}\t{drs}\t{dres}")
        return
    note = " (empty-dimension; theorem hypotheses fail)" if dc < 0 else ""
    out(f"dim C(G)={dc} dim RS={drs} dim restricted={dres}{note}")


def cmd_vinberg(args, out):
    p = polytope.read_polytope(args.polytope)
    s = vinberg.read_system(args.system)
    if s.f != p.f:
        raise polytope.PolytopeError(f"system has {s.f} facets, polytope has {p.f}")
    report = vinberg.check_vinberg(s, p)
    for r in report.results:
        if args.machine:
            out(f"{r.name}\t{'pass' if r.passed else 'fail'}\t{'numeric' if r.numeric else 'exact'}\t{r.detail}")
        else:
            out(r.line())
    out(f"overall\t{'pass' if report.passed else 'fail'}" if args.machine
        else f"overall {'PASS' if report.passed else 'FAIL'}")


def cmd_fiber(args, out):
    fib = deformation.example_fiber(args.example)
    params, free = " ".join(fib.realization.params), " ".join(fib.free_params)
    if args.machine:
        out(f"parameters\t{params}\tfree\t{free}")
        for i in sorted(fib.w):
            out(f"w\t{i}\t" + "\t".join(str(x) for x in fib.w[i]))
        for lab, g in fib.all_constraints():
            out(f"ineq\t{lab}\t{g}")
        return
    out(f"parameters: {params}; free: {free}")
    for i in sorted(fib.w):
        out(f"w_{i} = (" + ", ".join(str(x) for x in fib.w[i]) + ")")
    out("feasible iff every expression below is negative:")
    for lab, g in fib.all_constraints():
        out(f"  {lab}: {g}")


_SCAN_DEFAULTS = {"7.1": ("d", "x", (Fraction(-10), Fraction(0))), "7.2": ("s", "t", (Fraction(-2), Fraction(0)))}


def _scan_fiber(example):
    return deformation.example_fiber("7.1") if example == "7.1" else deformation.example_path_fiber()


def _scan_job(args):
    example, path, var, bracket, resolution, values = args
    fib = _scan_fiber(example)
    if resolution is None:
        return [deformation.components_1d(fib, {path: v}, var, bracket) for v in values]
    return [deformation.grid_components_1d(fib, {path: v}, var, bracket, resolution) for v in values]


def cmd_scan(args, out):
    path, var, bracket = _SCAN_DEFAULTS[args.example]
    if args.path and args.path != path:
        raise UsageError(f"example {args.example} has path parameter {path!r}")
    if args.fiber_range:
        bracket = args.fiber_range
    lo, hi = args.range_
    n = args.steps
    # interior samples plus the closed right end, matching half-open ranges like (1, 2]
    values = [lo + (hi - lo) * k / n for k in range(1, n + 1)]
    job = (args.example, path, var, bracket, args.resolution if args.grid else None)
    if args.workers <= 1:
        counts = _scan_job(job + (values,))
    else:
        chunks = [values[k::args.workers] for k in range(args.workers)]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            parts = list(pool.map(_scan_job, [job + (c,) for c in chunks]))
        counts = [0] * n
        for k, part in enumerate(parts):
            counts[k::args.workers] = part
    fib = _scan_fiber(args.example)

    def exact_count(v):
        return deformation.components_1d(fib, {path: v}, var, bracket)

    for v, c in zip(values, counts):
        if args.machine:
            out(f"sample\t{float(v):.9f}\t{c}")
    runs = []
    for v, c in zip(values, counts):
        if runs and runs[-1][2] == c:
            runs[-1][1] = v
        else:
            runs.append([v, v, c])
    if not args.machine:
        out(f"{path} range ({float(lo)}, {float(hi)}], {n} samples, {var} in ({float(bracket[0])}, {float(bracket[1])})"
            + (f", grid resolution {args.resolution}" if args.grid else ", exact intervals"))
        for a, b, c in runs:
            out(f"{path} in [{float(a):.6f}, {float(b):.6f}]: {c} component{'s' if c != 1 else ''}")
    for (_, a1, ca), (b0, _, cb) in zip(runs, runs[1:]):
        if exact_count(a1) == exact_count(b0):
            continue  # grid artefact: the exact count does not change here
        t_lo, t_hi = deformation.locate_transition(exact_count, a1, b0, args.tol)
        mid = (t_lo + t_hi) / 2
        if args.machine:
            out(f"transition\t{float(mid):.9f}\t{ca}\t{cb}")
        else:
            out(f"transition {path} = {float(mid):.6f} ({ca} -> {cb})")


COMMANDS = {
    "census": cmd_census,
    "enumerate": cmd_enumerate,
    "orderable": cmd_orderable,
    "normal-type": cmd_normal_type,
    "classify": cmd_classify,
    "dims": cmd_dims,
    "vinberg-check": cmd_vinberg,
    "fiber": cmd_fiber,
    "scan": cmd_scan,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def out(line: str):
        print(line, file=stdout)

    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"coxdeform: error: {exc}", file=stderr)
        return 1
    except (polytope.PolytopeError, OSError, UnicodeDecodeError) as exc:
        print(f"coxdeform: invalid input: {exc}", file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"coxdeform: internal error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
