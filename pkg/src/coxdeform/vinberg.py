"""Exact reflection systems on polytopes in projective 3-space.

Covectors and vectors are 4-tuples of ``Fraction``. A covector acts on a
vector by the standard pairing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import exact as ex
from .catalog import is_cone_over_polygon
from .polytope import CombinatorialPolytope, LabeledPolytope, ParseError, PolytopeError, face_lattice_isomorphic

DIM = 4
NUMERIC_TOL = 1e-9
MAX_GROUP_ELEMENTS = 10**5
MAX_WORD_LENGTH = 12

# 4 cos^2(pi/m) for the orders where it is rational
EXACT_FOUR_COS2 = {2: Fraction(0), 3: Fraction(1), 4: Fraction(2), 6: Fraction(3)}


def four_cos2(m):
    if m in EXACT_FOUR_COS2:
        return EXACT_FOUR_COS2[m]
    return 4 * math.cos(math.pi / m) ** 2


class RealizationError(ValueError):
    """Raised when a covector tuple does not cut out a 3-polytope.

    ``kind`` is one of ``degenerate``, ``redundant``, ``improper``, ``not-polytope``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


def pair(alpha, v) -> Fraction:
    return ex.dot(alpha, v)


def _ray_key(x):
    # scale by a positive number so the first nonzero entry is +-1
    lead = next(abs(c) for c in x if c != 0)
    return tuple(c / lead for c in x)


def halfspaces_to_face_lattice(covectors) -> tuple[CombinatorialPolytope, dict]:
    """Face lattice of ``{[x] : alpha_i(x) >= 0}`` and its vertex rays.

    Returns the polytope (facet ``i`` is ``covectors[i-1]``) and a map from
    each vertex (frozenset of facets) to a representative ray.
    """
    alphas = [ex.vec(a) for a in covectors]
    f = len(alphas)
    if f < 4:
        raise RealizationError("degenerate", "need at least four covectors")
    if any(len(a) != DIM for a in alphas):
        raise RealizationError("degenerate", "covectors must have four coordinates")
    if ex.rank(alphas) < DIM:
        raise RealizationError("degenerate", "covectors do not span the dual space")
    rays: dict[tuple, tuple] = {}
    for tri in combinations(range(f), 3):
        ker = ex.kernel([alphas[i] for i in tri], DIM)
        if len(ker) != 1:
            continue
        x = ker[0]
        vals = [pair(a, x) for a in alphas]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            x = tuple(-c for c in x)
        else:
            continue
        rays.setdefault(_ray_key(x), x)
    if not rays:
        raise RealizationError("not-polytope", "no vertex rays")
    keys = set(rays)
    if any(tuple(-c for c in k) in keys for k in keys):
        raise RealizationError("improper", "antipodal vertex rays")
    # the sum of all covectors is positive on every nonzero point of the
    # cone because the covectors span; it certifies proper convexity
    witness = tuple(sum(col) for col in zip(*alphas))
    if any(pair(witness, x) <= 0 for x in rays.values()):
        raise RealizationError("improper", "no positive functional on the vertex rays")
    vertex_of: dict[frozenset, tuple] = {}
    for x in rays.values():
        tight = frozenset(i + 1 for i, a in enumerate(alphas) if pair(a, x) == 0)
        vertex_of[tight] = x
    on_facet = {i: [x for v, x in vertex_of.items() if i in v] for i in range(1, f + 1)}
    for i, xs in on_facet.items():
        if len(xs) < 3 or ex.rank(xs) < 3:
            raise RealizationError("redundant", f"inequality {i} does not support a facet")
    sets = [frozenset(v for v in vertex_of if i in v) for i in range(1, f + 1)]
    if len(set(sets)) != f:
        raise RealizationError("redundant", "two inequalities support the same facet")
    ridges = [(i, j) for i, j in combinations(range(1, f + 1), 2)
              if sum(1 for v in vertex_of if i in v and j in v) >= 2]
    try:
        poly = CombinatorialPolytope(f, ridges, vertex_of.keys())
    except PolytopeError as exc:
        raise RealizationError("not-polytope", str(exc)) from exc
    return poly, vertex_of


@dataclass(frozen=True)
class Realization:
    covectors: tuple
    reference: LabeledPolytope

    def __post_init__(self):
        object.__setattr__(self, "covectors", tuple(ex.vec(a) for a in self.covectors))


def realization_status(covectors, reference) -> tuple[bool, str]:
    ref = reference.polytope if isinstance(reference, LabeledPolytope) else reference
    if len(covectors) != ref.f:
        return False, f"expected {ref.f} covectors, got {len(covectors)}"
    try:
        poly, _ = halfspaces_to_face_lattice(covectors)
    except RealizationError as exc:
        return False, str(exc)
    ident = {i: i for i in ref.facets}
    if not face_lattice_isomorphic(ref, poly, ident):
        return False, "face lattice differs from the reference under the identity facet map"
    return True, "ok"


def is_realization(r: Realization) -> bool:
    return realization_status(r.covectors, r.reference)[0]


# -- reflection systems -------------------------------------------------------


@dataclass(frozen=True)
class ReflectionSystem:
    alphas: tuple
    vs: tuple

    def __post_init__(self):
        if len(self.alphas) != len(self.vs):
            raise ValueError("need one vector per covector")
        object.__setattr__(self, "alphas", tuple(ex.vec(a) for a in self.alphas))
        object.__setattr__(self, "vs", tuple(ex.vec(v) for v in self.vs))

    @property
    def f(self) -> int:
        return len(self.alphas)

    def reflection(self, i: int) -> tuple:
        """Matrix of ``x -> x - alpha_i(x) v_i`` (facets are 1-based)."""
        return ex.sub(ex.identity(DIM), ex.outer(self.vs[i - 1], self.alphas[i - 1]))

    def cartan_matrix(self) -> tuple:
        return tuple(tuple(pair(a, v) for v in self.vs) for a in self.alphas)


def apply_group(obj, A, c):
    """Act by ``alpha_i -> alpha_i o A^-1 / c_i`` and ``v_i -> c_i A v_i``."""
    A = ex.mat(A)
    c = ex.vec(c)
    if abs(ex.det(A)) != 1:
        raise ValueError("A must have determinant +1 or -1")
    if any(ci <= 0 for ci in c):
        raise ValueError("scalars must be positive")
    Ainv = ex.inverse(A)
    if isinstance(obj, ReflectionSystem):
        alphas, vs = obj.alphas, obj.vs
    elif isinstance(obj, Realization):
        alphas, vs = obj.covectors, None
    else:
        alphas, vs = tuple(obj), None
    if len(c) != len(alphas):
        raise ValueError("need one scalar per facet")
    new_alphas = tuple(tuple(x / ci for x in ex.rowmat(a, Ainv)) for a, ci in zip(alphas, c))
    if vs is not None:
        new_vs = tuple(tuple(ci * x for x in ex.matvec(A, v)) for v, ci in zip(vs, c))
        return ReflectionSystem(new_alphas, new_vs)
    if isinstance(obj, Realization):
        return Realization(new_alphas, obj.reference)
    return new_alphas


# -- orbit normal form ----------------------------------------------------------


def _basis_facets(poly: CombinatorialPolytope) -> tuple[int, int, int, int]:
    """Facet 1 and three of its neighbours sharing no vertex with it, smallest first."""
    for trio in combinations(sorted(poly.neighbors(1)), 3):
        quad = {1, *trio}
        if not any(quad <= v for v in poly.vertices):
            return (1, *trio)
    raise ValueError("facet 1 has no three neighbours without a common vertex")


def normalize_realization(r: Realization) -> Realization:
    """Canonical representative of the orbit of ``r``.

    Facet 1 and its designated neighbours go to the standard dual basis; the
    remaining covectors are expanded in that basis and a spanning tree of their
    coefficients is scaled to +-1.
    """
    poly = r.reference.polytope
    if is_cone_over_polygon(poly):
        raise ValueError("cones over polygons have a nontrivial stabiliser")
    basis = _basis_facets(poly)
    alphas = {i: a for i, a in enumerate(r.covectors, start=1)}
    B = tuple(alphas[i] for i in basis)
    if ex.rank(B) < DIM:
        raise ValueError("leading covectors are dependent; not a realization")
    Binv = ex.inverse(B)
    rest = [i for i in poly.facets if i not in basis]
    # coefficient rows: alpha_i = sum_k t[i][k] * alpha_basis[k]
    t = {i: ex.rowmat(alphas[i], Binv) for i in rest}

    first = rest[0]
    nz5 = [k for k in range(DIM) if t[first][k] != 0]
    if len(nz5) < 3:
        raise ValueError("covector expansion has too few nonzero coefficients")
    k123, k4 = nz5[:3], next(k for k in range(DIM) if k not in nz5[:3])
    scale_basis: dict[int, Fraction] = {}
    scale_cov: dict[int, Fraction] = {first: Fraction(1)}
    for k in k123:
        scale_basis[k] = 1 / abs(t[first][k])
    link = next((i for i in rest[1:] if t[i][k4] != 0), None)
    if link is None:
        if t[first][k4] == 0:
            raise ValueError("no covector pins the last basis scale")
        scale_basis[k4] = 1 / abs(t[first][k4])
    else:
        j0 = next(k for k in k123 if t[link][k] != 0)
        scale_cov[link] = abs(t[link][j0]) * scale_basis[j0]
        scale_basis[k4] = scale_cov[link] / abs(t[link][k4])
    for i in rest:
        if i in scale_cov:
            continue
        p = next(k for k in range(DIM) if t[i][k] != 0)
        scale_cov[i] = abs(t[i][p]) * scale_basis[p]
    out = {}
    for slot, i in enumerate(basis):
        out[i] = tuple(Fraction(int(k == slot)) for k in range(DIM))
    for i in rest:
        out[i] = tuple(t[i][k] * scale_basis[k] / scale_cov[i] for k in range(DIM))
    return Realization(tuple(out[i] for i in poly.facets), r.reference)


# -- Vinberg conditions ---------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    detail: str = ""
    numeric: bool = False

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = " (numeric)" if self.numeric else ""
        return f"{self.name} {tag}{extra}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class ConditionReport:
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> ConditionResult:
        return next(r for r in self.results if r.name == name)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]


def check_vinberg(s: ReflectionSystem, p: LabeledPolytope) -> ConditionReport:
    if s.f != p.f:
        raise ValueError("system and polytope have different facet counts")
    A = s.cartan_matrix()
    n = s.f
    idx = range(n)
    bad1 = [i + 1 for i in idx if A[i][i] != 2]
    bad2 = [(i + 1, j + 1) for i in idx for j in idx if i != j and A[i][j] > 0]
    bad3 = [(i + 1, j + 1) for i in idx for j in idx if i < j and (A[i][j] == 0) != (A[j][i] == 0)]
    bad4, numeric4 = [], False
    for i, j in p.polytope.sorted_ridges():
        m = p.m(i, j)
        prod = A[i - 1][j - 1] * A[j - 1][i - 1]
        target = four_cos2(m)
        if isinstance(target, Fraction):
            ok = prod == target
        else:
            numeric4 = True
            ok = abs(float(prod) - target) <= NUMERIC_TOL
        if not ok:
            bad4.append((i, j))
    bad5 = [(i, j) for i, j in combinations(p.polytope.facets, 2)
            if not p.polytope.adjacent(i, j) and A[i - 1][j - 1] * A[j - 1][i - 1] < 4]
    ok6, why6 = realization_status(s.alphas, p)

    def res(name, bad, numeric=False):
        return ConditionResult(name, not bad, "" if not bad else f"violated at {bad[:6]}", numeric)

    return ConditionReport((
        res("V1", bad1),
        res("V2", bad2),
        res("V3", bad3),
        res("V4", bad4, numeric4),
        res("V5", bad5),
        ConditionResult("V6", ok6, "" if ok6 else why6),
    ))


def _matpow(m, k):
    out = ex.identity(len(m))
    for _ in range(k):
        out = ex.matmul(out, m)
    return out


def rotation_order_check(s: ReflectionSystem, i: int, j: int, m: int) -> bool:
    """True iff ``r_i r_j`` has order exactly ``m``."""
    if m < 1:
        raise ValueError("order must be at least 1")
    for k in (i, j):
        if pair(s.alphas[k - 1], s.vs[k - 1]) != 2:
            raise ValueError(f"alpha_{k}(v_{k}) != 2")
    rot = ex.matmul(s.reflection(i), s.reflection(j))
    eye = ex.identity(DIM)
    cur = eye
    for k in range(1, m + 1):
        cur = ex.matmul(cur, rot)
        if cur == eye:
            return k == m
    return False


@dataclass(frozen=True)
class GroupEnumeration:
    elements: frozenset
    closed: bool
    length: int

    def __len__(self):
        return len(self.elements)


class GroupTooLarge(RuntimeError):
    pass


def enumerate_group(s: ReflectionSystem, max_word_length: int = MAX_WORD_LENGTH) -> GroupEnumeration:
    """All products of at most ``max_word_length`` generators, breadth first."""
    if not 0 <= max_word_length <= MAX_WORD_LENGTH:
        raise ValueError(f"word length bound must be in [0, {MAX_WORD_LENGTH}]")
    gens = [s.reflection(i) for i in range(1, s.f + 1)]
    eye = ex.identity(DIM)
    seen = {eye}
    frontier = [eye]
    length = 0
    while frontier and length < max_word_length:
        nxt = []
        for g in frontier:
            for r in gens:
                h = ex.matmul(g, r)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > MAX_GROUP_ELEMENTS:
                        raise GroupTooLarge(f"more than {MAX_GROUP_ELEMENTS} elements")
        frontier = nxt
        length += 1
    closed = not frontier
    if frontier:
        # a last pass decides whether the bound happened to be exact
        closed = all(ex.matmul(g, r) in seen for g in frontier for r in gens)
    return GroupEnumeration(frozenset(seen), closed, length)


def standard_system(f: int = 4) -> ReflectionSystem:
    """``alpha_i = e_i*``, ``v_i = 2 e_i``: commuting reflections."""
    eye = ex.identity(DIM)
    return ReflectionSystem(eye[:f], tuple(tuple(2 * x for x in row) for row in eye[:f]))


def dihedral_system(m: int) -> ReflectionSystem:
    """Two reflections with ``A_12 A_21 = 4cos^2(pi/m)`` for ``m`` in {2, 3, 4, 6}."""
    prod = EXACT_FOUR_COS2[m]
    a = (Fraction(1), 0, 0, 0), (0, Fraction(1), 0, 0)
    a12 = -prod if prod else Fraction(0)
    vs = ((Fraction(2), Fraction(-1) if prod else Fraction(0), 0, 0),
          (a12, Fraction(2), 0, 0))
    return ReflectionSystem(a, vs)


# -- file format ------------------------------------------------------------


def parse_system_file(text: str | bytes) -> ReflectionSystem:
    """Lines ``alpha <i> p/q p/q p/q p/q`` and ``v <i> ...``; ``#`` starts a comment."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    alphas: dict[int, tuple] = {}
    vs: dict[int, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] not in ("alpha", "v"):
            raise ParseError(lineno, f"unknown keyword {toks[0]!r}")
        if len(toks) != 2 + DIM:
            raise ParseError(lineno, f"expected index and {DIM} rationals")
        try:
            i = int(toks[1])
            coords = tuple(Fraction(t) for t in toks[2:])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(lineno, f"{exc}") from exc
        table = alphas if toks[0] == "alpha" else vs
        if i in table:
            raise ParseError(lineno, f"duplicate {toks[0]} {i}")
        table[i] = coords
    n = len(alphas)
    if sorted(alphas) != list(range(1, n + 1)) or sorted(vs) != sorted(alphas):
        raise PolytopeError("alpha and v lines must cover indices 1..f exactly once each")
    return ReflectionSystem(tuple(alphas[i] for i in range(1, n + 1)), tuple(vs[i] for i in range(1, n + 1)))


def read_system(path) -> ReflectionSystem:
    return parse_system_file(Path(path).read_bytes())


def serialize_system(s: ReflectionSystem) -> str:
    lines = []
    for key, rows in (("alpha", s.alphas), ("v", s.vs)):
        for i, row in enumerate(rows, start=1):
            lines.append(f"{key} {i} " + " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
