import random
from fractions import Fraction as F

import pytest

from coxdeform import exact as ex
from coxdeform.deformation import example_family
from coxdeform.polytope import read_polytope
from coxdeform.vinberg import (
    GroupTooLarge,
    Realization,
    RealizationError,
    ReflectionSystem,
    apply_group,
    check_vinberg,
    dihedral_system,
    enumerate_group,
    halfspaces_to_face_lattice,
    is_realization,
    normalize_realization,
    parse_system_file,
    read_system,
    realization_status,
    rotation_order_check,
    serialize_system,
    standard_system,
)

E = [tuple(int(j == k) for j in range(4)) for k in range(4)]
PRISM = E + [(-1, 1, 1, 1)]


def random_group_element(rng, f):
    while True:
        A = [[F(rng.randint(-2, 2)) for _ in range(4)] for _ in range(4)]
        if abs(ex.det(A)) == 1:
            break
    c = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(f)]
    return A, c


def unimodular(rng):
    """Product of random elementary matrices, so det is exactly +-1."""
    A = ex.identity(4)
    for _ in range(6):
        i, j = rng.sample(range(4), 2)
        E_ = [list(r) for r in ex.identity(4)]
        E_[i][j] = F(rng.randint(-3, 3), rng.randint(1, 3))
        A = ex.matmul(A, E_)
    if rng.random() < 0.5:
        A = ex.matmul(A, [[F(-1) if (r == c == 0) else F(int(r == c)) for c in range(4)] for r in range(4)])
    return A


def test_prism_face_lattice():
    poly, rays = halfspaces_to_face_lattice(PRISM)
    assert (poly.f, poly.e, len(poly.vertices)) == (5, 9, 6)
    assert rays[frozenset({1, 2, 4})] == (0, 0, 1, 0)
    assert rays[frozenset({2, 3, 5})] == (1, 0, 0, 1)


@pytest.mark.parametrize("covectors, kind", [
    (E[:3] + [(1, 1, 1, 0)], "degenerate"),
    (E + [(1, 1, 1, 1)], "redundant"),
    (E + [tuple(-x for x in e) for e in E], "not-polytope"),  # only the origin survives
])
def test_bad_halfspace_systems(covectors, kind):
    with pytest.raises(RealizationError) as info:
        halfspaces_to_face_lattice(covectors)
    assert info.value.kind == kind


@pytest.mark.parametrize("d, ok", [(2, True), (F(6, 5), True), (1, False), (F(1, 2), False)])
def test_first_family_admissible_range(d, ok):
    assert is_realization(example_family("7.1").evaluate({"d": d})) is ok


def test_second_family_inside_box():
    assert is_realization(example_family("7.2").evaluate({"d1": 2, "d2": 2, "d3": F(1, 2)}))


def test_swapping_covectors_breaks_the_facet_map():
    r = example_family("7.1").evaluate({"d": 2})
    cov = list(r.covectors)
    cov[1], cov[2] = cov[2], cov[1]
    ok, why = realization_status(cov, r.reference)
    assert not ok and "identity" in why


def test_example_system_passes_all_conditions(ex71, data_dir):
    s = read_system(data_dir / "ex71-system.txt")
    report = check_vinberg(s, ex71)
    assert report.passed
    assert report.lines() == [f"V{i} PASS" for i in range(1, 7)]


def test_rescaled_vector_fails_v1(ex71, data_dir):
    s = read_system(data_dir / "ex71-system.txt")
    vs = list(s.vs)
    vs[0] = tuple(F(3, 2) * x for x in vs[0])
    report = check_vinberg(ReflectionSystem(s.alphas, tuple(vs)), ex71)
    assert not report["V1"].passed and not report.passed
    assert s.cartan_matrix()[0][0] * F(3, 2) == 3


def test_report_invariant_under_group(ex71, data_dir):
    s = read_system(data_dir / "ex71-system.txt")
    rng = random.Random(2)
    for _ in range(20):
        A = unimodular(rng)
        c = [F(rng.randint(1, 7), rng.randint(1, 7)) for _ in range(6)]
        t = apply_group(s, A, c)
        assert [r.passed for r in check_vinberg(t, ex71).results] == [True] * 6


def test_apply_group_validation():
    with pytest.raises(ValueError):
        apply_group(PRISM, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], [1] * 5)
    with pytest.raises(ValueError):
        apply_group(PRISM, ex.identity(4), [1, 1, 1, 1, -1])
    assert apply_group(PRISM, ex.identity(4), [1] * 5) == tuple(ex.vec(a) for a in PRISM)


def test_normalize_is_idempotent_and_orbit_constant():
    r = example_family("7.1").evaluate({"d": F(6, 5)})
    n = normalize_realization(r)
    assert n == r  # already in the normal gauge
    assert normalize_realization(n) == n
    rng = random.Random(9)
    for _ in range(20):
        g = apply_group(r, unimodular(rng), [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(6)])
        assert normalize_realization(g) == n


def test_normalize_rejects_cones(data_dir):
    from coxdeform.catalog import load_catalog

    pyramid = min(load_catalog(5), key=lambda p: p.e)
    from coxdeform.polytope import LabeledPolytope

    lp = LabeledPolytope(pyramid, {r: 2 for r in pyramid.ridges})
    with pytest.raises(ValueError):
        normalize_realization(Realization(PRISM, lp))


def test_reflections_are_involutions(data_dir):
    s = read_system(data_dir / "ex71-system.txt")
    for i in range(1, 7):
        r = s.reflection(i)
        assert ex.matmul(r, r) == ex.identity(4)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_rotation_orders(m):
    s = dihedral_system(m)
    assert rotation_order_check(s, 1, 2, m)
    assert not rotation_order_check(s, 1, 2, 2 * m)
    if m > 2:
        assert not rotation_order_check(s, 1, 2, m - 1)


def test_rotation_order_argument_checks():
    with pytest.raises(ValueError):
        rotation_order_check(dihedral_system(3), 1, 2, 0)
    bad = ReflectionSystem(E[:2], [(3, 0, 0, 0), (0, 2, 0, 0)])
    with pytest.raises(ValueError):
        rotation_order_check(bad, 1, 2, 2)


def test_group_orders():
    assert len(enumerate_group(standard_system(4))) == 16
    one = ReflectionSystem(E[:1], [(2, 0, 0, 0)])
    assert len(enumerate_group(one)) == 2
    for m in (2, 3, 4, 6):
        g = enumerate_group(dihedral_system(m))
        assert g.closed and len(g) == 2 * m


def test_infinite_group_is_truncated_or_guarded(ex71, data_dir):
    s = read_system(data_dir / "ex71-system.txt")
    try:
        g = enumerate_group(s, max_word_length=6)
    except GroupTooLarge:
        return
    assert not g.closed


def test_word_length_bound():
    with pytest.raises(ValueError):
        enumerate_group(standard_system(4), max_word_length=13)


def test_system_file_round_trip(data_dir):
    text = (data_dir / "ex71-system.txt").read_text()
    s = parse_system_file(text)
    assert parse_system_file(serialize_system(s)) == s


def test_system_file_errors():
    from coxdeform.polytope import ParseError, PolytopeError

    with pytest.raises(ParseError) as info:
        parse_system_file("# header\nalpha 1 1 0 0\n")
    assert info.value.lineno == 2
    with pytest.raises(PolytopeError):
        parse_system_file("alpha 1 1 0 0 0\n")  # missing v 1


@pytest.mark.parametrize("weights, order", [
    ({}, 2),
    ({(1, 2): 3}, 6),
    ({(1, 2): 4}, 8),
    ({(1, 2): 6}, 12),
    ({(1, 2): 3, (2, 3): 3}, 24),
    ({(1, 2): 4, (2, 3): 3}, 48),
])
def test_spherical_diagrams_generate_finite_groups(weights, order):
    from coxdeform.classify import CoxeterGraph, Kind, classify_component

    n = 1 + len(weights)
    assert classify_component(CoxeterGraph(tuple(range(1, n + 1)), weights)) == Kind.SPHERICAL
    # rational Cartan matrix with A_ij * A_ji = 4 cos^2(pi/m) on a tree
    A = [[F(2) if i == j else F(0) for j in range(n)] for i in range(n)]
    for (i, j), m in weights.items():
        A[i - 1][j - 1], A[j - 1][i - 1] = F(-1), -F({3: 1, 4: 2, 6: 3}[m])
    alphas = E[:n]
    vs = [tuple(A[i][j] for i in range(n)) + (0,) * (4 - n) for j in range(n)]
    g = enumerate_group(ReflectionSystem(alphas, vs))
    assert g.closed and len(g) == order
