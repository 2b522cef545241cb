"""Acceptance criteria, each at its stated tolerance. One summary line per criterion."""
import math
import random
import time
from fractions import Fraction as F

from closed_forms import w71
from coxdeform import exact as ex
from coxdeform.catalog import EXPECTED_COUNTS, enumerate_polytopes, load_catalog
from coxdeform.cli import _ratio
from coxdeform.deformation import (
    components_1d,
    dims,
    evaluate_fiber,
    example_family,
    grid_components_1d,
    interval_endpoints_1d,
    locate_transition,
)
from coxdeform.orderability import binary_labelings, census, is_orderable, is_orderable_oracle
from coxdeform.vinberg import (
    apply_group,
    check_vinberg,
    dihedral_system,
    enumerate_group,
    normalize_realization,
    rotation_order_check,
    standard_system,
)

CENSUS = {4: (64, 64, "1.000000"), 5: (654, 768, "0.851563"), 6: (7130, 14848, "0.480199"),
          7: (157334, 421888, "0.372928")}
S_LOW = (193 + 3 * math.sqrt(697)) / 176
S_HIGH = F(4, 19) * 5 + 4 * math.sqrt(6) / 19


def _rand_frac(rng, lo, hi, den=997):
    lo, hi = F(lo), F(hi)
    return lo + (hi - lo) * F(rng.randint(1, den - 1), den)


def test_census(criterion):
    t0 = time.perf_counter()
    got = {}
    for f in range(4, 8):
        good, total = census(f, polytopes=enumerate_polytopes(f))
        got[f] = (good, total, _ratio(good, total))
    criterion(1, "census f=4..7 from freshly enumerated polytopes", got == CENSUS,
              f"{time.perf_counter() - t0:.0f}s; " + " ".join(f"{g}/{t}={r}" for g, t, r in got.values()))


def test_catalog_counts(criterion):
    counts, totals, ok = {}, {}, True
    for f in range(4, 8):
        polys = enumerate_polytopes(f)
        counts[f] = len(polys)
        totals[f] = sum(2 ** p.e for p in polys)
    edges5 = sorted(p.e for p in load_catalog(5))
    ok = (counts == EXPECTED_COUNTS and totals == {f: CENSUS[f][1] for f in CENSUS} and edges5 == [8, 9])
    criterion(2, "catalog counts 1,2,7,34 and labeling totals", ok, f"counts {counts}, f=5 edges {edges5}")


def test_first_example_closed_forms(criterion, fiber71):
    rng = random.Random(71)
    bad = 0
    for _ in range(25):
        d = _rand_frac(rng, 1, 3) + F(1, 1000)
        x = _rand_frac(rng, -5, 5)
        if x in (0, -1, -2):
            x += F(1, 7)
        point = {"d": d, "x": x}
        want = w71(d, x)
        try:
            got = {i: tuple(c(point) for c in fiber71.w[i]) for i in range(1, 7)}
        except ZeroDivisionError:
            bad += 1
            continue
        bad += got != {i: tuple(F(c) for c in want[i]) for i in want}
    criterion(3, "first example w_1..w_6 equal the closed forms at 25 random points", bad == 0,
              f"{bad} mismatches; w_5 uses 1/(x+2) in its first two coordinates")


def test_first_example_region(criterion, fiber71):
    def nonempty(d):
        return bool(interval_endpoints_1d(fiber71, {"d": d}, "x", (-50, 0)))

    lo, hi = locate_transition(nonempty, F(5, 4), F(3, 2), F(1, 10**7))
    end = float((lo + hi) / 2)
    ok = abs(end - 4 / 3) <= 1e-6
    ok &= all(nonempty(d) for d in (F(101, 100), F(11, 10), F(6, 5), F(13, 10), F(133, 100)))
    ok &= not any(nonempty(d) for d in (F(1, 2), F(134, 100), F(3, 2), F(2), F(5)))
    errs = []
    for d in (F(6, 5), F(5, 4), F(13, 10)):
        ivs = interval_endpoints_1d(fiber71, {"d": d}, "x", (-10, 0))
        if len(ivs) != 1:
            ok = False
            continue
        errs.append(max(abs(ivs[0].lo - float(d / (2 - 2 * d))), abs(ivs[0].hi + 2)))
    ok &= len(errs) == 3 and max(errs) <= 1e-9
    criterion(4, "first example fiber nonempty iff 1 < d < 4/3; x-interval endpoints", ok,
              f"endpoint {end:.9f}; max endpoint error {max(errs):.1e}")


def test_second_example_transitions(criterion, path72):
    t0 = time.perf_counter()
    bracket = (-2, 0)

    def count(s):
        return components_1d(path72, {"s": s}, "t", bracket)

    samples = {
        0: [F(1001, 1000), F(11, 10), F(13, 10), F(3, 2), F(15465, 10000)],
        1: [F(15467, 10000), F(155, 100), F(156, 100), F(15683, 10000)],
        2: [F(15684, 10000), F(16, 10), F(175, 100), F(19, 10), F(2)],
    }
    ok = all(count(s) == c for c, ss in samples.items() for s in ss)
    a_lo, a_hi = locate_transition(count, F(3, 2), F(155, 100), F(1, 10**8))
    b_lo, b_hi = locate_transition(count, F(155, 100), F(16, 10), F(1, 10**8))
    ta, tb = float((a_lo + a_hi) / 2), float((b_lo + b_hi) / 2)
    ok &= abs(ta - S_LOW) <= 1e-6 and abs(tb - S_HIGH) <= 1e-6
    # the stated grid resolution reproduces the counts away from the transitions
    ok &= [grid_components_1d(path72, {"s": s}, "t", bracket, 2000) for s in (F(3, 2), F(155, 100), F(8, 5))] == [0, 1, 2]
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    criterion(5, "second example path: counts 0/1/2 and transition values", ok,
              f"transitions {ta:.7f}, {tb:.7f}; {elapsed:.0f}s; counts from exact intervals")


def _check_point(s, p):
    report = check_vinberg(s, p)
    if not report.passed:
        return False
    eye = ex.identity(4)
    if any(ex.matmul(s.reflection(i), s.reflection(i)) != eye for i in range(1, p.f + 1)):
        return False
    return all(rotation_order_check(s, i, j, p.m(i, j)) for i, j in p.polytope.sorted_ridges())


def test_vinberg_soundness(criterion, fiber71, fiber72, ex71, ex72):
    rng = random.Random(6)
    good71 = 0
    for _ in range(100):
        d = _rand_frac(rng, 1, F(4, 3))
        x = _rand_frac(rng, d / (2 - 2 * d), -2)
        point = {"d": d, "x": x}
        good71 += fiber71.is_feasible(point) and _check_point(evaluate_fiber(fiber71, point), ex71)
    good72 = tried = 0
    while tried < 100:
        base = {"d1": _rand_frac(rng, 1, 3), "d2": _rand_frac(rng, 1, 3), "d3": _rand_frac(rng, 0, 1)}
        ivs = interval_endpoints_1d(fiber72, base, "t", None)
        if not ivs:
            continue
        iv = rng.choice(ivs)
        a = iv.lo_bracket[1] if iv.lo_bracket else F(iv.hi_bracket[0]) - 10
        b = iv.hi_bracket[0] if iv.hi_bracket else F(iv.lo_bracket[1]) + 10
        point = dict(base, t=a + (b - a) * F(rng.randint(1, 99), 100))
        tried += 1
        good72 += fiber72.is_feasible(point) and _check_point(evaluate_fiber(fiber72, point), ex72)
    criterion(6, "V1-V6, r_i^2 = Id and ridge rotation orders at sampled feasible points",
              good71 == 100 and good72 == 100, f"first {good71}/100, second {good72}/100")


def test_dimensions(criterion, ex71, ex72, fiber71, fiber72):
    ok = dims(ex71) == (2, 1, 1) and dims(ex72) == (4, 3, 1)
    for fib, p in ((fiber71, ex71), (fiber72, ex72)):
        e2 = sum(1 for r in p.polytope.ridges if p.m(*r) == 2)
        ok &= len(fib.free_params) == 3 * p.f - p.polytope.e - e2 == 1
    criterion(7, "dims (2,1,1) and (4,3,1); one free solver parameter each", ok,
              f"{dims(ex71)} {dims(ex72)}")


def test_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    n = bad = 0
    for f in (4, 5, 6):
        for p in load_catalog(f):
            for lp in binary_labelings(p):
                n += 1
                bad += (is_orderable(lp) is not None) != is_orderable_oracle(lp)
    elapsed = time.perf_counter() - t0
    criterion(8, "greedy agrees with backtracking on every binary labeling, f <= 6",
              n == 15680 and bad == 0 and elapsed < 60, f"{n} labelings, {bad} disagreements, {elapsed:.0f}s")


def test_normalization_section(criterion):
    rng = random.Random(9)
    fam = example_family("7.1")
    ok = True
    for d in (F(11, 10), F(6, 5), F(5, 4), F(2), F(7, 2)):
        r = fam.evaluate({"d": d})
        n = normalize_realization(r)
        ok &= normalize_realization(n) == n
        for _ in range(20):
            A = ex.identity(4)
            for _ in range(6):
                i, j = rng.sample(range(4), 2)
                E = [list(row) for row in ex.identity(4)]
                E[i][j] = F(rng.randint(-3, 3), rng.randint(1, 3))
                A = ex.matmul(A, E)
            c = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(6)]
            ok &= normalize_realization(apply_group(r, A, c)) == n
    criterion(9, "normalization idempotent and constant on orbits (5 values of d x 20 elements)", ok)


def test_finite_groups(criterion):
    tet = enumerate_group(standard_system(4))
    orders = {m: enumerate_group(dihedral_system(m)) for m in (2, 3, 4, 6)}
    ok = tet.closed and len(tet) == 16 and all(g.closed and len(g) == 2 * m for m, g in orders.items())
    criterion(10, "group orders 16 and 2m", ok,
              f"tetrahedron {len(tet)}; " + ", ".join(f"m={m}: {len(g)}" for m, g in orders.items()))
