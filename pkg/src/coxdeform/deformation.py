"""Restricted deformation fibers: symbolic w-vectors and their feasible regions.

Given a parametric realization ``beta`` and an ordering certificate, the
vectors ``w_i`` are solved facet by facet from linear conditions. Degrees of
freedom left over become named free parameters. Feasibility is the strict
negativity of ``beta_j(w_i)`` over ridges with label >= 3.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np

from . import exact as ex
from . import roots
from .classify import k_of
from .orderability import OrderingCertificate, certificate_counts, check_certificate
from .polytope import CombinatorialPolytope, LabeledPolytope, edge_stats
from .ratfunc import Poly, RatFunc
from .vinberg import EXACT_FOUR_COS2, Realization, ReflectionSystem

ZERO = RatFunc.const(0)
ONE = RatFunc.const(1)


class FiberError(ValueError):
    pass


def _rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if isinstance(x, str):
        return RatFunc.var(x)
    return RatFunc.const(Fraction(x))


def pairing(beta, w) -> RatFunc:
    total = ZERO
    for b, x in zip(beta, w):
        if not b.is_zero() and not x.is_zero():
            total = total + b * x
    return total


@dataclass
class ParametricRealization:
    """Covectors with rational-function entries over named parameters.

    ``region`` lists expressions required to be strictly negative.
    """

    covectors: tuple
    params: tuple
    polytope: LabeledPolytope
    region: tuple = ()
    free_param_names: dict = field(default_factory=dict)

    def __post_init__(self):
        self.covectors = tuple(tuple(_rf(x) for x in c) for c in self.covectors)
        self.region = tuple((label, _rf(g)) for label, g in self.region)

    def evaluate(self, point: dict) -> Realization:
        return Realization(tuple(tuple(x(point) for x in c) for c in self.covectors), self.polytope)

    def in_region(self, point: dict) -> bool:
        return all(g(point) < 0 for _, g in self.region)


@dataclass
class ParametricFiber:
    realization: ParametricRealization
    certificate: OrderingCertificate
    w: dict  # facet -> 4-tuple of RatFunc
    free_params: tuple
    inequalities: tuple  # (label, RatFunc) required < 0
    side_conditions: tuple  # (label, Poly) required != 0

    @property
    def params(self) -> tuple:
        return tuple(self.realization.params) + tuple(self.free_params)

    def all_constraints(self):
        return tuple(self.realization.region) + tuple(self.inequalities)

    def evaluate(self, point: dict) -> ReflectionSystem:
        return evaluate_fiber(self, point)

    def is_feasible(self, point: dict) -> bool:
        for _, p in self.side_conditions:
            if p(point) == 0:
                return False
        for _, g in self.all_constraints():
            if g.den(point) == 0 or g(point) >= 0:
                return False
        return True

    def subs(self, values: dict) -> "ParametricFiber":
        """Fix some parameters to rationals."""
        rp = self.realization
        region = tuple((lab, g.subs(values)) for lab, g in rp.region)
        region = tuple((lab, g) for lab, g in region if not g.is_const())
        real = ParametricRealization(
            tuple(tuple(x.subs(values) for x in c) for c in rp.covectors),
            tuple(p for p in rp.params if p not in values),
            rp.polytope,
            region,
            dict(rp.free_param_names),
        )
        return ParametricFiber(
            real,
            self.certificate,
            {i: tuple(x.subs(values) for x in wi) for i, wi in self.w.items()},
            tuple(p for p in self.free_params if p not in values),
            tuple((lab, g.subs(values)) for lab, g in self.inequalities),
            tuple((lab, p.subs(values)) for lab, p in self.side_conditions),
        )

    def rename(self, mapping: dict) -> "ParametricFiber":
        rp = self.realization
        rn = lambda names: tuple(mapping.get(p, p) for p in names)  # noqa: E731
        real = ParametricRealization(
            tuple(tuple(x.rename(mapping) for x in c) for c in rp.covectors),
            rn(rp.params), rp.polytope,
            tuple((lab, g.rename(mapping)) for lab, g in rp.region),
            dict(rp.free_param_names),
        )
        return ParametricFiber(
            real, self.certificate,
            {i: tuple(x.rename(mapping) for x in wi) for i, wi in self.w.items()},
            rn(self.free_params),
            tuple((lab, g.rename(mapping)) for lab, g in self.inequalities),
            tuple((lab, p.rename(mapping)) for lab, p in self.side_conditions),
        )


def _four_cos2(m) -> Fraction:
    if m not in EXACT_FOUR_COS2:
        raise FiberError(f"label {m} has an irrational 4cos^2(pi/m); only 2, 3, 4, 6 are supported")
    return EXACT_FOUR_COS2[m]


def _det(rows) -> RatFunc:
    return ex.det_generic(rows, ZERO, ONE)


def _solve(rows, rhs) -> tuple:
    d = _det(rows)
    if d.is_zero():
        raise FiberError("constraint covectors are dependent")
    adj = ex.adjugate_generic(rows, ZERO, ONE)
    out = []
    for k in range(len(rows)):
        acc = ZERO
        for j in range(len(rows)):
            if not adj[k][j].is_zero() and not rhs[j].is_zero():
                acc = acc + adj[k][j] * rhs[j]
        out.append(acc / d)
    return tuple(out)


def _unit(k: int) -> tuple:
    return tuple(ONE if j == k else ZERO for j in range(4))


def solve_fiber(r: ParametricRealization, cert: OrderingCertificate, param_names: dict | None = None) -> ParametricFiber:
    """Solve for ``w_1..w_f`` in certificate order.

    For facet ``i``: ``beta_i(w_i) = 2``; ``beta_j(w_i) = 0`` for order-2
    neighbours; ``beta_j(w_i) = 4cos^2(pi/m)/beta_i(w_j)`` for earlier
    neighbours with label >= 3. Each missing equation is ``beta_j(w_i) = t``
    for a later neighbour ``j`` with label >= 3 (smallest indices first), the
    new parameter being named ``t<i>_<row>``.
    """
    p = r.polytope
    poly = p.polytope
    names = dict(r.free_param_names)
    if param_names:
        names.update(param_names)
    beta = {i: c for i, c in enumerate(r.covectors, start=1)}
    pos = {facet: k for k, facet in enumerate(cert.order)}
    w: dict = {}
    free = []
    for i in cert.order:
        rows = [beta[i]]
        rhs = [RatFunc.const(2)]
        nbrs = sorted(poly.neighbors(i))
        for j in nbrs:
            if p.m(i, j) == 2:
                rows.append(beta[j])
                rhs.append(ZERO)
        for j in nbrs:
            if p.m(i, j) != 2 and pos[j] < pos[i]:
                back = pairing(beta[i], w[j])
                if back.is_zero():
                    raise FiberError(f"beta_{i}(w_{j}) vanishes identically")
                rows.append(beta[j])
                rhs.append(RatFunc.const(_four_cos2(p.m(i, j))) / back)
        missing = 4 - len(rows)
        if missing < 0:
            raise FiberError(f"facet {i} has more than three constraints; certificate invalid")
        if missing:
            later = [beta[j] for j in nbrs if p.m(i, j) != 2 and pos[j] > pos[i]]
            options = [combo for combo in combinations(later, missing)]
            options += [combo for combo in combinations([_unit(k) for k in range(4)], missing)]
            chosen = next((c for c in options if not _det(rows + list(c)).is_zero()), None)
            if chosen is None:
                raise FiberError(f"no independent completion for facet {i}")
            for extra in chosen:
                raw = f"t{i}_{len(rows)}"
                name = names.get(raw, raw)
                free.append(name)
                rows.append(extra)
                rhs.append(RatFunc.var(name))
        w[i] = _solve(rows, rhs)

    inequalities = []
    for i, j in poly.sorted_ridges():
        if p.m(i, j) == 2:
            continue
        for a, b in ((i, j), (j, i)):
            inequalities.append((f"beta_{b}(w_{a})", pairing(beta[b], w[a])))
    side = []
    for i in sorted(w):
        for k, x in enumerate(w[i], start=1):
            if not x.den.is_const():
                side.append((f"den w_{i}[{k}]", x.den))
    for lab, g in inequalities:
        if not g.den.is_const():
            side.append((f"den {lab}", g.den))
    return ParametricFiber(r, cert, w, tuple(free), tuple(inequalities), tuple(side))


def evaluate_fiber(fiber: ParametricFiber, point: dict) -> ReflectionSystem:
    point = {k: Fraction(v) for k, v in point.items()}
    missing = set(fiber.params) - set(point)
    if missing:
        raise ValueError(f"missing parameter values {sorted(missing)}")
    for lab, den in fiber.side_conditions:
        if den(point) == 0:
            raise ZeroDivisionError(f"denominator of {lab} vanishes at {point}")
    real = fiber.realization.evaluate(point)
    f = len(real.covectors)
    vs = tuple(tuple(x(point) for x in fiber.w[i]) for i in range(1, f + 1))
    return ReflectionSystem(real.covectors, vs)


def dims(p: LabeledPolytope) -> tuple[int, int, int]:
    """``(3f - e2 - 9, e - 9, 3f - e - e2 - k)``."""
    e, e2 = edge_stats(p)
    f = p.f
    return 3 * f - e2 - 9, e - 9, 3 * f - e - e2 - k_of(p.polytope)


# -- one-dimensional feasibility ------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_bracket: tuple | None = None  # exact bracket around the endpoint root
    hi_bracket: tuple | None = None

    def __contains__(self, x) -> bool:
        return self.lo < float(x) < self.hi

    def width(self) -> float:
        return self.hi - self.lo


def _univariate_pieces(fiber: ParametricFiber, fixed: dict, var: str):
    """Numerator/denominator coefficient lists of every constraint in ``var``."""
    polys = []
    constraints = []
    for lab, g in fiber.all_constraints():
        num, den = g.num.subs(fixed), g.den.subs(fixed)
        if den.is_zero():
            constraints.append((lab, None, None))
            continue
        nu, de = num.univariate(var), den.univariate(var)
        constraints.append((lab, nu, de))
        polys.extend([nu, de])
    for _, d in fiber.side_conditions:
        polys.append(d.subs(fixed).univariate(var))
    return constraints, polys


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _feasible_at(constraints, x) -> bool:
    for _, nu, de in constraints:
        if nu is None:
            return False
        dv = roots.evaluate(de, x)
        if dv == 0:
            return False
        if _sign(roots.evaluate(nu, x)) * _sign(dv) >= 0:
            return False
    return True


def _critical_polynomial(polys) -> list:
    """Squarefree polynomial vanishing at every root of every input."""
    acc = [Fraction(1)]
    for p in polys:
        p = roots.trim(p)
        if len(p) <= 1:
            continue
        p = roots.squarefree(p)
        g = roots.gcd_poly(acc, p)
        if len(g) > 1:
            p = roots.divmod_poly(p, g)[0]
        acc = roots.trim(_polymul(acc, p))
    return acc


def _polymul(a, b) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def interval_endpoints_1d(fiber: ParametricFiber, fixed: dict, var: str, bracket=None,
                          tol=Fraction(1, 10**9)) -> list[Interval]:
    """Maximal open intervals of ``var`` where every constraint holds.

    ``bracket=None`` means the whole real line. Endpoints are roots of the
    constraint numerators/denominators, isolated by Sturm bisection to ``tol``.
    """
    fixed = {k: Fraction(v) for k, v in fixed.items()}
    unassigned = set(fiber.params) - set(fixed)
    if unassigned != {var}:
        raise ValueError(f"exactly one free variable expected, got {sorted(unassigned)}")
    tol = Fraction(tol)
    constraints, polys = _univariate_pieces(fiber, fixed, var)
    crit = _critical_polynomial(polys)
    if bracket is None:
        bound = roots.root_bound(crit) + 1 if len(crit) > 1 else Fraction(1)
        lo, hi, open_ends = -bound, bound, True
    else:
        lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
        open_ends = False
        if not lo < hi:
            raise ValueError("empty bracket")
    found = roots.isolate_roots(crit, lo, hi, tol) if len(crit) > 1 else []
    found = [b for b in found if lo < b[1] and b[0] < hi and not (b[0] == b[1] == lo)]
    # cut points: bracket ends plus root brackets
    cuts = [(lo, lo)] + found + [(hi, hi)]
    pieces = []
    any_defined = False
    for left, right in zip(cuts, cuts[1:]):
        a, b = left[1], right[0]
        if not a < b:
            continue
        mid = (a + b) / 2
        defined = all(nu is not None and roots.evaluate(de, mid) != 0 for _, nu, de in constraints)
        any_defined = any_defined or defined
        if defined and _feasible_at(constraints, mid):
            pieces.append((left, right))
    if not any_defined and constraints:
        raise FiberError("no sample point in the bracket has all denominators nonzero")
    out = []
    for left, right in pieces:
        lo_v = float((left[0] + left[1]) / 2)
        hi_v = float((right[0] + right[1]) / 2)
        lo_b, hi_b = left, right
        if open_ends and left == (lo, lo):
            lo_v, lo_b = float("-inf"), None
        if open_ends and right == (hi, hi):
            hi_v, hi_b = float("inf"), None
        out.append(Interval(lo_v, hi_v, lo_b, hi_b))
    return out


def locate_transition(predicate: Callable[[Fraction], object], a, b, tol=Fraction(1, 10**7)) -> tuple[Fraction, Fraction]:
    """Bisect ``[a, b]`` where ``predicate(a) != predicate(b)``."""
    a, b = Fraction(a), Fraction(b)
    pa, pb = predicate(a), predicate(b)
    if pa == pb:
        raise ValueError("predicate takes the same value at both ends")
    while b - a > tol:
        mid = (a + b) / 2
        pm = predicate(mid)
        if pm == pa:
            a = mid
        else:
            b, pb = mid, pm
    return a, b


# -- grid scans -------------------------------------------------------------------


def _axis(lo, hi, n) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    step = (hi - lo) / n
    return [lo + (k + Fraction(1, 2)) * step for k in range(n)]


def count_components(grid: np.ndarray) -> int:
    """Connected components of ``True`` cells under axis adjacency."""
    seen = np.zeros(grid.shape, dtype=bool)
    count = 0
    for start in zip(*np.nonzero(grid)):
        if seen[start]:
            continue
        count += 1
        seen[start] = True
        queue = deque([start])
        while queue:
            cell = queue.popleft()
            for ax in range(grid.ndim):
                for step in (-1, 1):
                    nb = list(cell)
                    nb[ax] += step
                    if 0 <= nb[ax] < grid.shape[ax]:
                        nb = tuple(nb)
                        if grid[nb] and not seen[nb]:
                            seen[nb] = True
                            queue.append(nb)
    return count


@dataclass(frozen=True)
class ScanResult:
    axes: tuple  # (name, list of sample values)
    grid: np.ndarray
    components: int


def _eval_rows(args):
    fiber, names, axes, fixed, first_values = args
    rest = axes[1:]
    shape = tuple(len(v) for v in rest)
    out = np.zeros((len(first_values),) + shape, dtype=bool)
    for a, x0 in enumerate(first_values):
        for idx in np.ndindex(*shape) if shape else [()]:
            point = dict(fixed)
            point[names[0]] = x0
            for ax, k in enumerate(idx):
                point[names[ax + 1]] = rest[ax][k]
            out[(a,) + idx] = fiber.is_feasible(point)
    return out


def scan_region(fiber: ParametricFiber, box: dict, resolution, fixed: dict | None = None, workers: int = 1) -> ScanResult:
    """Exact feasibility on a cell-centred grid over ``box`` plus its component count.

    Points where a denominator vanishes count as infeasible.
    """
    fixed = {k: Fraction(v) for k, v in (fixed or {}).items()}
    names = list(box)
    if set(names) | set(fixed) != set(fiber.params):
        raise ValueError("every parameter must be boxed or fixed")
    res = resolution if isinstance(resolution, dict) else {n: resolution for n in names}
    if any(res[n] < 2 for n in names):
        raise ValueError("resolution must be at least 2 per axis")
    axes = [_axis(box[n][0], box[n][1], res[n]) for n in names]
    chunks = np.array_split(np.arange(len(axes[0])), max(1, workers))
    jobs = [(fiber, names, axes, fixed, [axes[0][k] for k in c]) for c in chunks if len(c)]
    if workers <= 1:
        parts = [_eval_rows(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_eval_rows, jobs))
    grid = np.concatenate(parts, axis=0)
    return ScanResult(tuple(zip(names, axes)), grid, count_components(grid))


def components_1d(fiber: ParametricFiber, fixed: dict, var: str, bracket) -> int:
    """Number of maximal feasible open intervals of ``var`` inside ``bracket``."""
    return len(interval_endpoints_1d(fiber, fixed, var, bracket))


def grid_components_1d(fiber: ParametricFiber, fixed: dict, var: str, bracket, steps: int) -> int:
    """Component count of the cell-centred 1-D grid, read off the exact intervals.

    A grid point lying inside a root bracket is decided by exact evaluation.
    """
    fixed = {k: Fraction(v) for k, v in fixed.items()}
    intervals = interval_endpoints_1d(fiber, fixed, var, bracket)
    constraints, _ = _univariate_pieces(fiber, fixed, var)
    xs = _axis(bracket[0], bracket[1], steps)
    flags = []
    for x in xs:
        inside = None
        for iv in intervals:
            lo_b = iv.lo_bracket or (Fraction(bracket[0]),) * 2
            hi_b = iv.hi_bracket or (Fraction(bracket[1]),) * 2
            if lo_b[1] < x < hi_b[0]:
                inside = True
                break
            if lo_b[0] <= x <= lo_b[1] or hi_b[0] <= x <= hi_b[1]:
                inside = _feasible_at(constraints, x)
                break
        flags.append(bool(inside))
    return sum(1 for k, v in enumerate(flags) if v and (k == 0 or not flags[k - 1]))


# -- the worked examples ------------------------------------------------------------


def _poly_from(edges: dict, verts: list, name: str) -> LabeledPolytope:
    return LabeledPolytope(CombinatorialPolytope(6, edges, verts), edges, name=name)


def example_polytope(example_id: str) -> LabeledPolytope:
    if example_id == "7.1":
        edges = {(1, 2): 2, (1, 3): 2, (1, 4): 2, (2, 3): 2, (2, 6): 2, (4, 6): 2, (5, 6): 2,
                 (3, 4): 3, (4, 5): 3, (3, 5): 3}
        verts = [{1, 2, 3}, {1, 3, 4}, {1, 2, 4, 6}, {2, 3, 5, 6}, {3, 4, 5}, {4, 5, 6}]
        return _poly_from(edges, verts, "ex71")
    if example_id == "7.2":
        edges = {(1, 2): 3, (1, 3): 3, (1, 4): 2, (1, 5): 3, (1, 6): 2, (2, 3): 4, (2, 4): 2,
                 (2, 5): 3, (2, 6): 2, (3, 4): 3, (3, 5): 2, (5, 6): 3}
        verts = [{1, 2, 4}, {2, 3, 4}, {1, 3, 4}, {1, 2, 6}, {1, 5, 6}, {2, 5, 6}, {2, 3, 5}, {1, 3, 5}]
        return _poly_from(edges, verts, "ex72")
    raise ValueError(f"unknown example {example_id!r}; expected '7.1' or '7.2'")


def example_family(example_id: str) -> ParametricRealization:
    """Parametric covectors of the two worked examples with their validity regions."""
    p = example_polytope(example_id)
    e = [tuple(int(j == k) for j in range(4)) for k in range(4)]
    if example_id == "7.1":
        d = RatFunc.var("d")
        cov = e + [(-1, 1, 1, 1), (-1, d, 0, 1)]
        return ParametricRealization(tuple(cov), ("d",), p, (("d > 1", 1 - d),), {"t3_3": "x"})
    d1, d2, d3 = (RatFunc.var(n) for n in ("d1", "d2", "d3"))
    cov = e + [(1, 1, 1, -1), (d1, d2, d3, -1)]
    region = (("d1 > 1", 1 - d1), ("d2 > 1", 1 - d2), ("d3 > 0", -d3), ("d3 < 1", d3 - 1))
    return ParametricRealization(tuple(cov), ("d1", "d2", "d3"), p, region, {"t1_3": "t"})


def example_fiber(example_id: str) -> ParametricFiber:
    r = example_family(example_id)
    # the worked examples are solved in the natural facet order
    order = tuple(r.polytope.polytope.facets)
    cert = OrderingCertificate(order, certificate_counts(r.polytope, order))
    if not check_certificate(r.polytope, cert):
        raise FiberError("natural order is not an ordering certificate")
    return solve_fiber(r, cert)


def example_path_fiber() -> ParametricFiber:
    """The second example restricted to the path ``(d1, d2, d3) = (s, 2, 1/2)``."""
    return example_fiber("7.2").subs({"d2": 2, "d3": Fraction(1, 2)}).rename({"d1": "s"})
