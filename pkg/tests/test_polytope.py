import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxdeform.catalog import load_catalog
from coxdeform.polytope import (
    CombinatorialPolytope,
    InvariantError,
    LabeledPolytope,
    ParseError,
    canonical_code,
    edge_stats,
    face_lattice_isomorphic,
    parse_polytope_file,
    serialize_polytope,
)

TET = CombinatorialPolytope(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
                            [{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}])


def test_tetrahedron_basics():
    assert TET.f == 4 and TET.e == 6 and len(TET.vertices) == 4
    assert TET.neighbors(1) == frozenset({2, 3, 4})
    lp = LabeledPolytope(TET, {r: 2 for r in TET.ridges})
    assert edge_stats(lp) == (6, 6)
    assert lp.m(1, 1) == 1


def test_non_adjacent_label_is_infinite(ex71):
    assert ex71.m(1, 5) == float("inf")
    assert ex71.m(3, 4) == 3


def test_euler_violation_rejected():
    with pytest.raises(InvariantError):
        CombinatorialPolytope(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)],
                              [{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}])


def test_labels_must_cover_ridges():
    with pytest.raises(ValueError):
        LabeledPolytope(TET, {(1, 2): 2})
    with pytest.raises(ValueError):
        LabeledPolytope(TET, {r: 1 for r in TET.ridges})


def test_parse_round_trip_is_bit_exact(data_dir):
    for path in sorted(data_dir.glob("*.poly")):
        text = path.read_text()
        assert serialize_polytope(parse_polytope_file(text)) == text


@pytest.mark.parametrize("text, line", [
    ("polytope x\nfacets 4\nedge 1 2\n", 3),
    ("polytope x\nfacets four\n", 2),
    ("polytope x\nfacets 4\nbogus 1 2 3\n", 3),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_polytope_file(text)
    assert info.value.lineno == line


def test_comments_and_blank_lines_ignored(data_dir):
    text = (data_dir / "ex71.poly").read_text()
    noisy = "# header\n\n" + text.replace("\n", "  # note\n", 3)
    assert parse_polytope_file(noisy).polytope == parse_polytope_file(text).polytope


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=33), st.randoms(use_true_random=False))
def test_canonical_code_invariant_under_relabeling(index, rnd):
    p = load_catalog(7)[index]
    perm = list(p.facets)
    rnd.shuffle(perm)
    q = p.relabel(dict(zip(p.facets, perm)))
    assert canonical_code(q) == canonical_code(p)
    assert face_lattice_isomorphic(p, q)


def test_distinct_polytopes_have_distinct_codes():
    codes = [canonical_code(p) for f in (6, 7) for p in load_catalog(f)]
    assert len(codes) == len(set(codes))


def test_facet_map_must_be_bijection():
    with pytest.raises(ValueError):
        face_lattice_isomorphic(TET, TET, {1: 1, 2: 1, 3: 3, 4: 4})


def test_identity_map_detects_relabeling(ex71):
    p = ex71.polytope
    swapped = p.relabel({1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6})
    ident = {i: i for i in p.facets}
    assert face_lattice_isomorphic(p, p, ident)
    assert not face_lattice_isomorphic(p, swapped, ident)
    assert face_lattice_isomorphic(p, swapped)


def test_random_relabel_round_trip():
    rng = random.Random(7)
    for p in load_catalog(6):
        perm = list(p.facets)
        rng.shuffle(perm)
        fwd = dict(zip(p.facets, perm))
        back = {v: k for k, v in fwd.items()}
        assert p.relabel(fwd).relabel(back) == p
