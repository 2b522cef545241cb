"""Combinatorial and labeled 3-polytopes, their validation and text format.

Facets are numbered ``1..f``. A ridge (edge of the 3-polytope) is an ordered
pair ``(i, j)`` with ``i < j``; a vertex is the frozenset of facets meeting it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import networkx as nx

__all__ = [
    "PolytopeError",
    "ParseError",
    "InvariantError",
    "CombinatorialPolytope",
    "LabeledPolytope",
    "parse_polytope_file",
    "read_polytope",
    "serialize_polytope",
    "edge_stats",
    "canonical_code",
    "face_lattice_isomorphic",
]


class PolytopeError(ValueError):
    """Base class for malformed polytope input."""


class ParseError(PolytopeError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InvariantError(PolytopeError):
    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class CombinatorialPolytope:
    """Face lattice of a 3-polytope, stored as facets, ridges and vertices.

    Construction validates every invariant; instances are immutable.
    """

    f: int
    ridges: frozenset
    vertices: frozenset
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, f: int, ridges: Iterable, vertices: Iterable, *, check: bool = True):
        ridge_set = frozenset(_pair(int(i), int(j)) for i, j in ridges)
        vertex_set = frozenset(frozenset(int(k) for k in v) for v in vertices)
        object.__setattr__(self, "f", int(f))
        object.__setattr__(self, "ridges", ridge_set)
        object.__setattr__(self, "vertices", vertex_set)
        adj: dict[int, set[int]] = {i: set() for i in range(1, self.f + 1)}
        for i, j in ridge_set:
            if i in adj and j in adj:
                adj[i].add(j)
                adj[j].add(i)
        object.__setattr__(self, "_adj", {i: frozenset(s) for i, s in adj.items()})
        if check:
            self.validate()

    # -- basic queries -------------------------------------------------

    @property
    def facets(self) -> range:
        return range(1, self.f + 1)

    @property
    def e(self) -> int:
        return len(self.ridges)

    def neighbors(self, i: int) -> frozenset:
        return self._adj[i]

    def adjacent(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def facet_vertices(self, i: int) -> list[frozenset]:
        return [v for v in self.vertices if i in v]

    def sorted_ridges(self) -> list[tuple[int, int]]:
        return sorted(self.ridges)

    def sorted_vertices(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(v)) for v in self.vertices)

    def dual_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.facets)
        g.add_edges_from(self.ridges)
        return g

    def boundary_cycle(self, i: int) -> list[frozenset]:
        """Vertices of facet ``i`` in cyclic order around its boundary."""
        verts = self.facet_vertices(i)
        if not verts:
            return []
        nbr = {v: [] for v in verts}
        for j in self._adj[i]:
            ends = [v for v in verts if j in v]
            if len(ends) == 2:
                a, b = ends
                nbr[a].append(b)
                nbr[b].append(a)
        start = min(verts, key=lambda v: tuple(sorted(v)))
        cycle = [start]
        prev, cur = None, start
        while True:
            nxt = [w for w in nbr[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            if cur == start:
                break
            cycle.append(cur)
        return cycle

    # -- validation ----------------------------------------------------

    def validate(self) -> None:
        f = self.f
        if f < 4:
            raise InvariantError("facet-count", f"a 3-polytope needs at least 4 facets, got {f}")
        for i, j in self.ridges:
            if not (1 <= i <= f and 1 <= j <= f) or i == j:
                raise InvariantError("ridge-range", f"ridge {i} {j} out of range for f={f}")
        for v in self.vertices:
            if len(v) < 3:
                raise InvariantError("vertex-size", f"vertex {sorted(v)} meets fewer than 3 facets")
            if min(v) < 1 or max(v) > f:
                raise InvariantError("vertex-range", f"vertex {sorted(v)} out of range for f={f}")
        nv, ne = len(self.vertices), len(self.ridges)
        if nv - ne + f != 2:
            raise InvariantError("euler", f"V - E + F = {nv} - {ne} + {f} = {nv - ne + f}, expected 2")
        for i in self.facets:
            if len(self._adj[i]) < 3:
                raise InvariantError("facet-degree", f"facet {i} lies in {len(self._adj[i])} ridges (< 3)")
        # a ridge has exactly two endpoints; two facets sharing two vertices share a ridge
        for i, j in combinations(self.facets, 2):
            count = sum(1 for v in self.vertices if i in v and j in v)
            if (i, j) in self.ridges:
                if count != 2:
                    raise InvariantError("ridge-vertices", f"ridge {i} {j} lies in {count} vertices (expected 2)")
            elif count > 1:
                raise InvariantError("ridge-vertices", f"facets {i},{j} share {count} vertices but no ridge")
        for i in self.facets:
            cyc = self.boundary_cycle(i)
            deg = len(self._adj[i])
            if len(cyc) != deg or len(self.facet_vertices(i)) != deg:
                raise InvariantError("facet-cycle", f"boundary of facet {i} is not a single {deg}-cycle")
        for v in self.vertices:
            # facets around a vertex form a cycle of ridges through that vertex
            sub = nx.Graph()
            sub.add_nodes_from(v)
            for i, j in combinations(sorted(v), 2):
                if (i, j) in self.ridges:
                    sub.add_edge(i, j)
            if sub.number_of_edges() != len(v) or any(d != 2 for _, d in sub.degree()) or not nx.is_connected(sub):
                raise InvariantError("vertex-cycle", f"facets around vertex {sorted(v)} do not form a cycle")
        g = self.dual_graph()
        if not nx.is_connected(g):
            raise InvariantError("3-connected", "dual graph is disconnected")
        for a, b in combinations(self.facets, 2):
            h = g.copy()
            h.remove_nodes_from((a, b))
            if not nx.is_connected(h):
                raise InvariantError("3-connected", f"removing facets {a},{b} disconnects the dual graph")
        planar, _ = nx.check_planarity(g)
        if not planar:
            raise InvariantError("planar", "dual graph is not planar")

    def relabel(self, perm: Mapping[int, int]) -> "CombinatorialPolytope":
        """Apply a facet bijection ``old -> new``."""
        return CombinatorialPolytope(
            self.f,
            [(perm[i], perm[j]) for i, j in self.ridges],
            [[perm[k] for k in v] for v in self.vertices],
            check=False,
        )


@dataclass(frozen=True)
class LabeledPolytope:
    """A combinatorial polytope together with an integer label ``m >= 2`` on each ridge.

    Non-adjacent facet pairs implicitly carry ``m = inf``; such labels are never stored.
    """

    polytope: CombinatorialPolytope
    labels: Mapping[tuple[int, int], int]
    name: str = "unnamed"

    def __post_init__(self):
        labels = {_pair(*k): int(m) for k, m in dict(self.labels).items()}
        object.__setattr__(self, "labels", labels)
        missing = self.polytope.ridges - labels.keys()
        if missing:
            raise InvariantError("labels", f"ridges without label: {sorted(missing)}")
        extra = labels.keys() - self.polytope.ridges
        if extra:
            raise InvariantError("labels", f"labels on non-ridges: {sorted(extra)}")
        bad = {k: m for k, m in labels.items() if m < 2}
        if bad:
            raise InvariantError("labels", f"labels must be integers >= 2: {bad}")

    @property
    def f(self) -> int:
        return self.polytope.f

    def m(self, i: int, j: int) -> float:
        """Label of the pair ``{i, j}``; ``inf`` when the facets are not adjacent."""
        if i == j:
            return 1
        return self.labels.get(_pair(i, j), float("inf"))

    def relabel(self, perm: Mapping[int, int]) -> "LabeledPolytope":
        return LabeledPolytope(
            self.polytope.relabel(perm),
            {_pair(perm[i], perm[j]): m for (i, j), m in self.labels.items()},
            self.name,
        )

    def with_labels(self, labels: Mapping[tuple[int, int], int]) -> "LabeledPolytope":
        return LabeledPolytope(self.polytope, labels, self.name)


def edge_stats(p: LabeledPolytope) -> tuple[int, int]:
    """Return ``(e, e2)``: the number of ridges and of ridges labeled 2."""
    return len(p.polytope.ridges), sum(1 for m in p.labels.values() if m == 2)


# -- text format -------------------------------------------------------------


def parse_polytope_file(text: str | bytes) -> LabeledPolytope:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    name = "unnamed"
    f = None
    edges: dict[tuple[int, int], int] = {}
    vertices: list[tuple[int, ...]] = []

    def ints(lineno, toks, n=None):
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise ParseError(lineno, f"expected integers, got {' '.join(toks)!r}") from None
        if n is not None and len(vals) != n:
            raise ParseError(lineno, f"expected {n} integers, got {len(vals)}")
        return vals

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "polytope":
            if len(rest) != 1:
                raise ParseError(lineno, "polytope line takes one name")
            name = rest[0]
        elif key == "facets":
            (f,) = ints(lineno, rest, 1)
            if f < 1:
                raise ParseError(lineno, "facet count must be positive")
        elif key == "edge":
            if f is None:
                raise ParseError(lineno, "edge before facets line")
            i, j, m = ints(lineno, rest, 3)
            if not (1 <= i <= f and 1 <= j <= f) or i == j:
                raise ParseError(lineno, f"bad facet indices {i} {j}")
            if m < 2:
                raise ParseError(lineno, f"edge label must be >= 2, got {m}")
            if _pair(i, j) in edges:
                raise ParseError(lineno, f"duplicate edge {i} {j}")
            edges[_pair(i, j)] = m
        elif key == "vertex":
            if f is None:
                raise ParseError(lineno, "vertex before facets line")
            idx = ints(lineno, rest)
            if len(idx) < 3 or len(set(idx)) != len(idx):
                raise ParseError(lineno, "vertex needs at least 3 distinct facets")
            if any(not 1 <= k <= f for k in idx):
                raise ParseError(lineno, "vertex facet index out of range")
            vertices.append(tuple(sorted(idx)))
        else:
            raise ParseError(lineno, f"unknown keyword {key!r}")
    if f is None:
        raise ParseError(0, "missing facets line")
    if len(set(vertices)) != len(vertices):
        raise InvariantError("vertex-unique", "duplicate vertex lines")
    poly = CombinatorialPolytope(f, edges.keys(), vertices)
    return LabeledPolytope(poly, edges, name)


def read_polytope(path) -> LabeledPolytope:
    with open(path, "rb") as fh:
        return parse_polytope_file(fh.read())


def serialize_polytope(p: LabeledPolytope | CombinatorialPolytope, name: str | None = None,
                       default_label: int = 3) -> str:
    """Bit-exact text form: sorted edges, then lexicographically sorted vertices.

    Bare combinatorial polytopes are written with every edge labeled ``default_label``.
    """
    if isinstance(p, CombinatorialPolytope):
        p = LabeledPolytope(p, {r: default_label for r in p.ridges}, name or "unnamed")
    lines = [f"polytope {name or p.name}", f"facets {p.f}"]
    for i, j in p.polytope.sorted_ridges():
        lines.append(f"edge {i} {j} {p.labels[(i, j)]}")
    for v in p.polytope.sorted_vertices():
        lines.append("vertex " + " ".join(map(str, v)))
    return "\n".join(lines) + "\n"


# -- isomorphism ---------------------------------------------------------------


def _refine(adj: dict[int, frozenset], colors: dict[int, int]) -> dict[int, int]:
    """Colour refinement until stable; colours are renumbered canonically."""
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in adj}
        order = sorted(set(sig.values()))
        rank = {s: k for k, s in enumerate(order)}
        new = {v: rank[sig[v]] for v in adj}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _encode(p: CombinatorialPolytope, perm: dict[int, int]) -> tuple:
    edges = tuple(sorted(_pair(perm[i], perm[j]) for i, j in p.ridges))
    verts = tuple(sorted(tuple(sorted(perm[k] for k in v)) for v in p.vertices))
    return edges, verts


def _best_encoding(p: CombinatorialPolytope) -> tuple:
    adj = {i: p.neighbors(i) for i in p.facets}
    init = {i: len(adj[i]) * 1000 + sum(1 for v in p.vertices if i in v and len(v) > 3) for i in p.facets}
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(adj, colors)
        cells: dict[int, list[int]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            perm = {v: c + 1 for v, c in colors.items()}
            enc = _encode(p, perm)
            if best is None or enc < best:
                best = enc
            return
        for v in sorted(cells[target]):
            # individualise v ahead of the rest of its cell
            nc = {u: (2 * c if c < target else 2 * c + 1) for u, c in colors.items()}
            nc[v] = 2 * target
            search(nc)

    search(init)
    return best


def canonical_code(p: CombinatorialPolytope) -> str:
    """Relabeling-invariant key; equal codes iff the face lattices are isomorphic.

    The key is the lexicographically least (edges, vertices) encoding over the
    leaves of an individualisation-refinement search, written as hex bitmasks.
    """
    edges, verts = _best_encoding(p)
    f = p.f
    adj_bits = 0
    pairs = {pr: n for n, pr in enumerate(combinations(range(1, f + 1), 2))}
    for pr in edges:
        adj_bits |= 1 << pairs[pr]
    width = (f + 3) // 4
    vcode = "".join(format(sum(1 << (x - 1) for x in v), f"0{width}x") for v in verts)
    return f"f{f}e{len(edges)}v{len(verts)}-{adj_bits:x}-{vcode}"


def face_lattice_isomorphic(p: CombinatorialPolytope, q: CombinatorialPolytope,
                            facet_map: Mapping[int, int] | None = None) -> bool:
    """Decide whether ``p`` and ``q`` have isomorphic face lattices.

    With ``facet_map`` only that facet correspondence is checked.
    """
    if facet_map is None:
        if (p.f, p.e, len(p.vertices)) != (q.f, q.e, len(q.vertices)):
            return False
        return canonical_code(p) == canonical_code(q)
    fm = dict(facet_map)
    if sorted(fm) != list(p.facets) or sorted(fm.values()) != list(q.facets):
        raise ValueError("facet_map is not a bijection between the facet sets")
    if p.f != q.f:
        return False
    ridges = frozenset(_pair(fm[i], fm[j]) for i, j in p.ridges)
    verts = frozenset(frozenset(fm[k] for k in v) for v in p.vertices)
    return ridges == q.ridges and verts == q.vertices
