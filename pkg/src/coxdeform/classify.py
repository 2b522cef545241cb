"""Coxeter graphs of labeled polytopes: spherical/affine/large and normal type."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .catalog import cone_apexes, is_cone_over_polygon, prism_bases
from .polytope import CombinatorialPolytope, LabeledPolytope

INF = math.inf
GRAM_TOL = 1e-9


class Kind(str, Enum):
    SPHERICAL = "Spherical"
    AFFINE = "Affine"
    LARGE = "Large"


@dataclass(frozen=True)
class CoxeterGraph:
    """Nodes with weighted edges; ``m = 2`` pairs carry no edge, ``inf`` is allowed."""

    nodes: tuple
    weights: dict = field(hash=False)

    def __post_init__(self):
        w = {}
        for (i, j), m in dict(self.weights).items():
            if i == j or m == 2:
                continue
            if m != INF and (m < 3 or int(m) != m):
                raise ValueError(f"edge weight must be an integer >= 3 or inf, got {m}")
            w[(i, j) if i < j else (j, i)] = m if m == INF else int(m)
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "weights", w)

    def m(self, i, j):
        if i == j:
            return 1
        return self.weights.get((i, j) if i < j else (j, i), 2)

    def neighbors(self, v):
        return [u for u in self.nodes if u != v and self.m(u, v) != 2]

    def components(self) -> list["CoxeterGraph"]:
        left = set(self.nodes)
        out = []
        while left:
            start = min(left)
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.neighbors(v):
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            left -= comp
            out.append(self.subgraph(comp))
        return out

    def subgraph(self, nodes) -> "CoxeterGraph":
        nodes = set(nodes)
        return CoxeterGraph(tuple(nodes), {k: m for k, m in self.weights.items() if k[0] in nodes and k[1] in nodes})

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def relabel(self, perm) -> "CoxeterGraph":
        return CoxeterGraph(tuple(perm[v] for v in self.nodes),
                            {(perm[i], perm[j]): m for (i, j), m in self.weights.items()})


def coxeter_graph(p: LabeledPolytope) -> CoxeterGraph:
    """Edges for labels >= 3 and weight ``inf`` for every non-adjacent facet pair."""
    weights = {}
    for i, j in combinations(p.polytope.facets, 2):
        m = p.m(i, j)
        if m != 2:
            weights[(i, j)] = m
    return CoxeterGraph(tuple(p.polytope.facets), weights)


# -- exact arithmetic in Q(sqrt2, sqrt3) ----------------------------------------


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Surd:
    """``a + b*sqrt2 + c*sqrt3 + d*sqrt6`` with rational coefficients."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a, self.b, self.c, self.d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)

    def __add__(self, o):
        o = _surd(o)
        return Surd(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        return self + (-_surd(o))

    def __rsub__(self, o):
        return _surd(o) - self

    def __mul__(self, o):
        o = _surd(o)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Surd(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * c1 * d2 + 3 * d1 * c2,
            a1 * c2 + c1 * a2 + 2 * b1 * d2 + 2 * d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def _split(self):
        # self = p + q*sqrt2 with p = a + c*sqrt3, q = b + d*sqrt3
        return (self.a, self.c), (self.b, self.d)

    @staticmethod
    def _sign3(u, v) -> int:
        su, sv = _sign(u), _sign(v)
        if su == 0 or su == sv:
            return sv if su == 0 else su
        if sv == 0:
            return su
        return su * _sign(u * u - 3 * v * v)

    def sign(self) -> int:
        (pu, pv), (qu, qv) = self._split()
        sp, sq = self._sign3(pu, pv), self._sign3(qu, qv)
        if sp == 0:
            return sq
        if sq == 0 or sp == sq:
            return sp
        # p^2 - 2q^2 in Q(sqrt3)
        nu = pu * pu + 3 * pv * pv - 2 * (qu * qu + 3 * qv * qv)
        nv = 2 * pu * pv - 4 * qu * qv
        return sp * self._sign3(nu, nv)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        (pu, pv), (qu, qv) = self._split()
        nu = pu * pu + 3 * pv * pv - 2 * (qu * qu + 3 * qv * qv)
        nv = 2 * pu * pv - 4 * qu * qv
        den = nu * nu - 3 * nv * nv
        iu, iv = nu / den, -nv / den  # 1 / (p^2 - 2q^2)
        conj = Surd(pu, -qu, pv, -qv)  # p - q*sqrt2
        return conj * Surd(iu, 0, iv, 0)

    def __truediv__(self, o):
        return self * _surd(o).inverse()

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2) + float(self.c) * math.sqrt(3) + float(self.d) * math.sqrt(6)

    def __eq__(self, o):
        o = _surd(o)
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.c}, {self.d})"


def _surd(x) -> Surd:
    return x if isinstance(x, Surd) else Surd(x)


EXACT_WEIGHTS = {3, 4, 6, INF}


def neg_cos_pi_over(m) -> Surd:
    """``-cos(pi/m)`` for ``m`` in {1, 2, 3, 4, 6, inf}."""
    table = {
        1: Surd(-1),
        2: Surd(0),
        3: Surd(Fraction(-1, 2)),
        4: Surd(0, Fraction(-1, 2)),
        6: Surd(0, 0, Fraction(-1, 2)),
        INF: Surd(-1),
    }
    return table[m]


def gram_matrix_exact(g: CoxeterGraph) -> list[list[Surd]]:
    return [[Surd(1) if i == j else neg_cos_pi_over(g.m(i, j)) for j in g.nodes] for i in g.nodes]


def gram_matrix_float(g: CoxeterGraph) -> np.ndarray:
    n = len(g.nodes)
    b = np.eye(n)
    for a, i in enumerate(g.nodes):
        for c, j in enumerate(g.nodes):
            if a != c:
                m = g.m(i, j)
                b[a, c] = -1.0 if m == INF else -math.cos(math.pi / m)
    return b


def _pivots(mat: list[list[Surd]]) -> list[Surd] | None:
    """Symmetric elimination without pivoting; ``None`` if a zero pivot appears early."""
    a = [row[:] for row in mat]
    n = len(a)
    piv = []
    for k in range(n):
        p = a[k][k]
        piv.append(p)
        if p.is_zero():
            return piv if k == n - 1 else None
        inv = p.inverse()
        for i in range(k + 1, n):
            if a[i][k].is_zero():
                continue
            factor = a[i][k] * inv
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return piv


def _positive_definite(mat) -> bool:
    piv = _pivots(mat)
    return piv is not None and all(p.sign() > 0 for p in piv)


def _determinant(mat) -> Surd:
    a = [row[:] for row in mat]
    n = len(a)
    det = Surd(1)
    for k in range(n):
        r = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if r is None:
            return Surd(0)
        if r != k:
            a[k], a[r] = a[r], a[k]
            det = -det
        det = det * a[k][k]
        inv = a[k][k].inverse()
        for i in range(k + 1, n):
            if a[i][k].is_zero():
                continue
            factor = a[i][k] * inv
            for j in range(k, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return det


def classify_gram_exact(g: CoxeterGraph) -> Kind:
    b = gram_matrix_exact(g)
    if _positive_definite(b):
        return Kind.SPHERICAL
    n = len(b)
    minor = [row[1:] for row in b[1:]]
    if n >= 2 and _determinant(b).is_zero() and _positive_definite(minor):
        return Kind.AFFINE
    return Kind.LARGE


# eigenvalue error for these small matrices is ~1e-14, far inside this margin
FILTER_MARGIN = 1e-6


def _clear_float_verdict(g: CoxeterGraph) -> Kind | None:
    """Spherical or large when the smallest eigenvalue is well away from zero."""
    eig = np.linalg.eigvalsh(gram_matrix_float(g))
    if eig[0] > FILTER_MARGIN:
        return Kind.SPHERICAL
    if eig[0] < -FILTER_MARGIN:
        return Kind.LARGE
    return None


def classify_gram_float(g: CoxeterGraph, tol: float = GRAM_TOL) -> Kind:
    eig = np.linalg.eigvalsh(gram_matrix_float(g))
    if eig[0] > tol:
        return Kind.SPHERICAL
    if abs(eig[0]) <= tol and (len(eig) == 1 or eig[1] > tol):
        return Kind.AFFINE
    return Kind.LARGE


def classify_component(g: CoxeterGraph, method: str = "auto") -> Kind:
    """Spherical iff the Gram matrix is positive definite, affine iff it is
    semidefinite with one-dimensional kernel, large otherwise.

    ``method`` is ``"auto"`` (exact when every weight is in {3, 4, 6, inf},
    after a float eigenvalue filter that only settles clear-cut cases),
    ``"exact"``, ``"float"`` or ``"table"``.
    """
    if not g.is_connected():
        raise ValueError("classify_component needs a connected Coxeter graph")
    if method == "table":
        return classify_by_table(g)
    exact_ok = all(m in EXACT_WEIGHTS for m in g.weights.values())
    if method == "exact" or (method == "auto" and exact_ok):
        if not exact_ok:
            raise ValueError("exact Gram route needs weights in {3, 4, 6, inf}")
        if method == "auto":
            return _clear_float_verdict(g) or classify_gram_exact(g)
        return classify_gram_exact(g)
    return classify_gram_float(g)


# -- classification tables -------------------------------------------------------


def _path_order(g: CoxeterGraph) -> list:
    ends = [v for v in g.nodes if len(g.neighbors(v)) == 1]
    start = min(ends)
    order = [start]
    prev = None
    while True:
        nxt = [u for u in g.neighbors(order[-1]) if u != prev]
        if not nxt:
            return order
        prev = order[-1]
        order.append(nxt[0])


def _legs(g: CoxeterGraph, center) -> list[list]:
    """Weights along each leg leaving ``center``, nearest edge first."""
    legs = []
    for u in g.neighbors(center):
        ws = [g.m(center, u)]
        prev, cur = center, u
        while True:
            nxt = [x for x in g.neighbors(cur) if x != prev]
            if len(nxt) != 1:
                break
            ws.append(g.m(cur, nxt[0]))
            prev, cur = cur, nxt[0]
        legs.append(ws)
    return legs


def classify_by_table(g: CoxeterGraph) -> Kind:
    """Match the connected diagram against the spherical and affine lists."""
    n = len(g.nodes)
    ws = list(g.weights.values())
    if n == 1:
        return Kind.SPHERICAL
    if INF in ws:
        return Kind.AFFINE if n == 2 else Kind.LARGE
    if n == 2:
        return Kind.SPHERICAL
    deg = {v: len(g.neighbors(v)) for v in g.nodes}
    if len(ws) >= n:  # has a cycle
        if len(ws) == n and all(d == 2 for d in deg.values()) and all(m == 3 for m in ws):
            return Kind.AFFINE
        return Kind.LARGE
    branch = [v for v in g.nodes if deg[v] >= 3]
    if any(deg[v] >= 5 for v in branch):
        return Kind.LARGE
    if any(deg[v] == 4 for v in branch):
        return Kind.AFFINE if n == 5 and all(m == 3 for m in ws) else Kind.LARGE
    if not branch:
        order = _path_order(g)
        seq = [g.m(order[k], order[k + 1]) for k in range(n - 1)]
        odd = [k for k, m in enumerate(seq) if m != 3]
        if not odd:
            return Kind.SPHERICAL
        if len(odd) == 1:
            k, m = odd[0], seq[odd[0]]
            at_end = k in (0, n - 2)
            if m == 4:
                if at_end:
                    return Kind.SPHERICAL
                if n == 4:
                    return Kind.SPHERICAL  # F4
                if n == 5 and k in (1, 2):
                    return Kind.AFFINE  # F4~
                return Kind.LARGE
            if m == 5 and at_end and n <= 4:
                return Kind.SPHERICAL  # H3, H4
            if m == 6 and at_end and n == 3:
                return Kind.AFFINE  # G2~
            return Kind.LARGE
        if len(odd) == 2 and odd == [0, n - 2] and seq[0] == 4 and seq[-1] == 4:
            return Kind.AFFINE  # C~
        return Kind.LARGE
    if len(branch) == 1:
        legs = sorted(_legs(g, branch[0]), key=len)
        lens = tuple(len(leg) for leg in legs)
        flat = [m for leg in legs for m in leg]
        if all(m == 3 for m in flat):
            if lens[0] == 1 and lens[1] == 1:
                return Kind.SPHERICAL  # D
            if lens in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
                return Kind.SPHERICAL  # E6, E7, E8
            if lens in ((1, 2, 5), (1, 3, 3), (2, 2, 2)):
                return Kind.AFFINE  # E8~, E7~, E6~
            return Kind.LARGE
        odd = [(a, b) for a, leg in enumerate(legs) for b, m in enumerate(leg) if m != 3]
        if lens[0] == 1 and lens[1] == 1 and len(odd) == 1:
            a, b = odd[0]
            if legs[a][b] == 4 and b == len(legs[a]) - 1 and (a == 2 or lens == (1, 1, 1)):
                return Kind.AFFINE  # B~
        return Kind.LARGE
    if len(branch) == 2 and all(m == 3 for m in ws):
        for c in branch:
            if sum(1 for u in g.neighbors(c) if deg[u] == 1) < 2:
                return Kind.LARGE
        return Kind.AFFINE  # D~
    return Kind.LARGE


# -- normal type --------------------------------------------------------------


@dataclass(frozen=True)
class NormalTypeVerdict:
    verdict: str  # "Normal", "NotNormal" or "Unknown"
    reason: str | None = None

    def __str__(self):
        return self.verdict if self.reason is None else f"{self.verdict}({self.reason})"


def classify_components(p: LabeledPolytope) -> list[tuple[tuple, Kind]]:
    return [(c.nodes, classify_component(c)) for c in coxeter_graph(p).components()]


def normal_type(p: LabeledPolytope) -> NormalTypeVerdict:
    """Tri-state verdict; the finite-group clause is tested first, then the
    cone and prism shapes, then irreducible-and-large."""
    poly = p.polytope
    kinds = [k for _, k in classify_components(p)]
    if all(k == Kind.SPHERICAL for k in kinds):
        return NormalTypeVerdict("NotNormal", "finite-group")
    for _, base in cone_apexes(poly):
        if all(p.m(base, j) == 2 for j in poly.neighbors(base)):
            return NormalTypeVerdict("NotNormal", "cone-all-2")
    for a, b in prism_bases(poly):
        if all(p.m(a, j) == 2 for j in poly.neighbors(a)) and all(p.m(b, j) == 2 for j in poly.neighbors(b)):
            return NormalTypeVerdict("NotNormal", "prism-all-2")
    if len(kinds) == 1 and kinds[0] == Kind.LARGE:
        return NormalTypeVerdict("Normal")
    return NormalTypeVerdict("Unknown")


def k_of(p: CombinatorialPolytope) -> int:
    """Dimension of the projective stabiliser of a realization."""
    if p.f == 4:
        return 3
    if is_cone_over_polygon(p):
        return 1
    return 0


# -- exhaustive cross-validation ---------------------------------------------------


def graph_classes(n: int, weights=(3, 4, 5, 6, INF), chunk: int = 1 << 18):
    """One connected Coxeter graph per isomorphism class on ``n`` nodes.

    Assignments of ``weights`` or no edge to the node pairs are coded in base
    ``len(weights) + 1``; an assignment is kept when its code is the smallest
    over all node permutations.
    """
    from itertools import permutations

    pairs = list(combinations(range(n), 2))
    k = len(weights) + 1
    if not pairs:
        yield CoxeterGraph((1,), {})
        return
    pos = {p: idx for idx, p in enumerate(pairs)}
    # column j: place values of each pair after applying permutation j
    perms = list(permutations(range(n)))
    place = np.empty((len(pairs), len(perms)))
    for j, perm in enumerate(perms):
        for idx, (a, b) in enumerate(pairs):
            pa, pb = perm[a], perm[b]
            place[idx, j] = float(k) ** pos[(pa, pb) if pa < pb else (pb, pa)]
    powers = k ** np.arange(len(pairs), dtype=np.int64)
    total = k ** len(pairs)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // powers) % k
        keep = (digits @ place).min(axis=1) == codes  # exact: codes stay below 2**53
        for row in digits[keep]:
            w = {(a + 1, b + 1): weights[c - 1] for (a, b), c in zip(pairs, row) if c}
            g = CoxeterGraph(tuple(range(1, n + 1)), w)
            if g.is_connected():
                yield g


def cross_validate(max_nodes: int = 5, weights=(3, 4, 5, 6, INF)) -> tuple[int, list]:
    """Compare the Gram and table routes on every class from :func:`graph_classes`.

    Returns ``(graphs checked, mismatches)``.
    """
    checked, bad = 0, []
    for n in range(1, max_nodes + 1):
        for g in graph_classes(n, weights):
            checked += 1
            gram, table = classify_component(g), classify_by_table(g)
            if gram != table:
                bad.append((g, gram, table))
    return checked, bad
