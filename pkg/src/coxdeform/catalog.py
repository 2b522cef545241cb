"""Enumeration of combinatorial 3-polytopes with few facets.

Candidate dual graphs on ``f`` nodes are filtered by the compiled kernel
(degree, edge count, 3-connectivity); planarity and the face structure come
from the unique planar embedding of each survivor.
"""
from __future__ import annotations

import os
from itertools import combinations
from pathlib import Path

import networkx as nx

from . import kernels
from .polytope import CombinatorialPolytope, canonical_code, read_polytope, serialize_polytope

MIN_FACETS, MAX_FACETS = 4, 7
EXPECTED_COUNTS = {4: 1, 5: 2, 6: 7, 7: 34}

_BUNDLED = Path(__file__).parent / "data" / "catalog"


def _faces(emb: nx.PlanarEmbedding) -> list[list]:
    seen = set()
    faces = []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        faces.append(emb.traverse_face(u, v, mark_half_edges=seen))
    return faces


def polytope_from_dual_graph(g: nx.Graph) -> CombinatorialPolytope | None:
    """Read the face lattice off a 3-connected planar dual graph.

    Nodes must be ``1..f``; returns ``None`` when ``g`` is not planar.
    """
    planar, emb = nx.check_planarity(g)
    if not planar:
        return None
    verts = [frozenset(face) for face in _faces(emb)]
    return CombinatorialPolytope(g.number_of_nodes(), g.edges(), verts)


def _mask_to_graph(n: int, mask: int) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    for k, (a, b) in enumerate(combinations(range(n), 2)):
        if (mask >> k) & 1:
            g.add_edge(a + 1, b + 1)
    return g


def enumerate_polytopes(f: int) -> list[CombinatorialPolytope]:
    """One polytope per isomorphism class with ``f`` facets, sorted by canonical code."""
    if not MIN_FACETS <= f <= MAX_FACETS:
        raise ValueError(f"facet count must be in [{MIN_FACETS}, {MAX_FACETS}], got {f}")
    found: dict[str, CombinatorialPolytope] = {}
    for mask in kernels.filter_dual_graphs(f):
        g = _mask_to_graph(f, mask)
        p = polytope_from_dual_graph(g)
        if p is None:
            continue
        code = canonical_code(p)
        if code not in found:
            found[code] = p
    out = [found[c] for c in sorted(found)]
    if f in EXPECTED_COUNTS and len(out) != EXPECTED_COUNTS[f]:
        raise RuntimeError(f"enumeration produced {len(out)} polytopes for f={f}, expected {EXPECTED_COUNTS[f]}")
    return out


# -- shape recognisers ------------------------------------------------------


def cone_apexes(p: CombinatorialPolytope) -> list[tuple[frozenset, int]]:
    """``(apex vertex, base facet)`` pairs: the apex lies in every facet except the base."""
    out = []
    for v in p.sorted_vertices():
        if len(v) == p.f - 1:
            (base,) = set(p.facets) - set(v)
            out.append((frozenset(v), base))
    return out


def is_cone_over_polygon(p: CombinatorialPolytope) -> bool:
    return bool(cone_apexes(p))


def prism_bases(p: CombinatorialPolytope) -> list[tuple[int, int]]:
    """Pairs of disjoint ``k``-gonal facets joined by ``k`` quadrilaterals."""
    k = p.f - 2
    if k < 3:
        return []
    out = []
    for a, b in combinations(p.facets, 2):
        if len(p.neighbors(a)) != k or len(p.neighbors(b)) != k:
            continue
        if p.adjacent(a, b) or any(a in v and b in v for v in p.vertices):
            continue
        sides = set(p.facets) - {a, b}
        if all(len(p.neighbors(s)) == 4 and p.adjacent(s, a) and p.adjacent(s, b) for s in sides):
            out.append((a, b))
    return out


def is_polygon_prism(p: CombinatorialPolytope) -> bool:
    return bool(prism_bases(p))


def is_tetrahedron(p: CombinatorialPolytope) -> bool:
    return p.f == 4


# -- bundled asset ------------------------------------------------------------


def catalog_dir() -> Path:
    env = os.environ.get("COXDEFORM_CATALOG_DIR")
    return Path(env) if env else _BUNDLED


def write_catalog(polys: list[CombinatorialPolytope], out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in polys:
        code = canonical_code(p)
        path = out_dir / f"{code}.poly"
        path.write_text(serialize_polytope(p, name=code))
        paths.append(path)
    return paths


def load_catalog(f: int, directory: Path | None = None) -> list[CombinatorialPolytope]:
    """Catalog entries with ``f`` facets, from disk when present, else enumerated."""
    base = Path(directory) if directory else catalog_dir()
    sub = base / f"f{f}"
    if sub.is_dir():
        polys = [read_polytope(path).polytope for path in sorted(sub.glob("*.poly"))]
        if polys:
            return sorted(polys, key=canonical_code)
    return enumerate_polytopes(f)


def rebuild_catalog(directory: Path | None = None) -> dict[int, int]:
    base = Path(directory) if directory else _BUNDLED
    counts = {}
    for f in range(MIN_FACETS, MAX_FACETS + 1):
        polys = enumerate_polytopes(f)
        sub = base / f"f{f}"
        if sub.is_dir():
            for old in sub.glob("*.poly"):
                old.unlink()
        write_catalog(polys, sub)
        counts[f] = len(polys)
    return counts
