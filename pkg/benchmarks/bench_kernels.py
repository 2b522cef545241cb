"""Compiled vs pure-Python kernels on the census workloads.

    python3 benchmarks/bench_kernels.py [--facets 6] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

from coxdeform import _kernels_py
from coxdeform.catalog import load_catalog

try:
    from coxdeform import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--facets", type=int, default=6, help="facet count for both workloads")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    polys = load_catalog(args.facets)
    ridge_sets = []
    for p in polys:
        rs = p.sorted_ridges()
        ridge_sets.append(([i - 1 for i, _ in rs], [j - 1 for _, j in rs]))

    backends = [("python", _kernels_py)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not available; timing the fallback only")

    rows = []
    for name, mod in backends:
        t_graph, graphs = _best(lambda m=mod: m.filter_dual_graphs(args.facets), args.repeat)
        t_count, count = _best(
            lambda m=mod: sum(m.count_orderable(args.facets, ra, rb) for ra, rb in ridge_sets), args.repeat)
        rows.append((name, t_graph, len(graphs), t_count, count))

    print(f"f = {args.facets}: {len(polys)} polytopes, {sum(2 ** p.e for p in polys)} labelings")
    print(f"{'backend':<8} {'graph filter s':>15} {'survivors':>10} {'census s':>10} {'orderable':>10}")
    for name, tg, ng, tc, nc in rows:
        print(f"{name:<8} {tg:>15.4f} {ng:>10d} {tc:>10.4f} {nc:>10d}")
    if len(rows) == 2:
        py, cy = rows
        if (py[2], py[4]) != (cy[2], cy[4]):
            raise SystemExit("backends disagree")
        print(f"speedup: graph filter x{py[1] / cy[1]:.1f}, census x{py[3] / cy[3]:.1f}")


if __name__ == "__main__":
    main()
