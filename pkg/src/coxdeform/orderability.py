"""Orderability of labeled polytopes and the census of binary labelings."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import kernels
from .catalog import MAX_FACETS, MIN_FACETS, load_catalog
from .polytope import CombinatorialPolytope, LabeledPolytope


@dataclass(frozen=True)
class OrderingCertificate:
    """A facet order in which every facet has at most three qualifying ridges.

    ``counts[i] = (a_i, b_i)``: order-2 ridges of facet ``i`` and ridges with
    label >= 3 to facets earlier in ``order``.
    """

    order: tuple[int, ...]
    counts: dict

    def position(self) -> dict[int, int]:
        return {facet: k for k, facet in enumerate(self.order)}


def certificate_counts(p: LabeledPolytope, order) -> dict[int, tuple[int, int]]:
    pos = {facet: k for k, facet in enumerate(order)}
    counts = {}
    for i in p.polytope.facets:
        a = b = 0
        for j in p.polytope.neighbors(i):
            if p.m(i, j) == 2:
                a += 1
            elif pos[j] < pos[i]:
                b += 1
        counts[i] = (a, b)
    return counts


def check_certificate(p: LabeledPolytope, cert: OrderingCertificate) -> bool:
    if sorted(cert.order) != list(p.polytope.facets):
        return False
    counts = certificate_counts(p, cert.order)
    return counts == dict(cert.counts) and all(a + b <= 3 for a, b in counts.values())


def _ridge_arrays(poly: CombinatorialPolytope):
    ridges = poly.sorted_ridges()
    return ridges, [i - 1 for i, _ in ridges], [j - 1 for _, j in ridges]


def _two_mask(p: LabeledPolytope, ridges) -> int:
    return sum(1 << k for k, r in enumerate(ridges) if p.labels[r] == 2)


def is_orderable(p: LabeledPolytope) -> OrderingCertificate | None:
    """Reverse greedy elimination; ``None`` when no admissible order exists.

    A facet is removable once its order-2 ridges plus its label >= 3 ridges to
    still-present facets number at most three. Removal only lowers the other
    facets' counts, so getting stuck means no order exists.
    """
    ridges, ra, rb = _ridge_arrays(p.polytope)
    order = kernels.greedy_order(p.f, ra, rb, _two_mask(p, ridges))
    if order is None:
        return None
    order = tuple(v + 1 for v in order)
    return OrderingCertificate(order, certificate_counts(p, order))


def is_orderable_oracle(p: LabeledPolytope) -> bool:
    """Exhaustive backtracking over facet orders, built front to back."""
    if p.f > 8:
        raise ValueError("oracle limited to f <= 8")
    poly = p.polytope
    two = {i: sum(1 for j in poly.neighbors(i) if p.m(i, j) == 2) for i in poly.facets}
    big = {i: [j for j in poly.neighbors(i) if p.m(i, j) != 2] for i in poly.facets}

    def extend(placed: set[int]) -> bool:
        if len(placed) == p.f:
            return True
        for i in poly.facets:
            if i in placed:
                continue
            # a facet's count is fixed once every earlier facet is known
            if two[i] + sum(1 for j in big[i] if j in placed) <= 3:
                placed.add(i)
                if extend(placed):
                    return True
                placed.remove(i)
        return False

    return extend(set())


def _census_job(args):
    f, ra, rb, lo, hi = args
    return kernels.count_orderable(f, ra, rb, lo, hi)


def census(f: int, workers: int = 1, polytopes=None) -> tuple[int, int]:
    """``(orderable, total)`` over all binary labelings of all catalog entries.

    A labeling marks each ridge as order 2 or order > 2; that distinction is
    all orderability sees.
    """
    if not MIN_FACETS <= f <= MAX_FACETS and polytopes is None:
        raise ValueError(f"facet count must be in [{MIN_FACETS}, {MAX_FACETS}], got {f}")
    polys = load_catalog(f) if polytopes is None else polytopes
    jobs = []
    total = 0
    for poly in polys:
        _, ra, rb = _ridge_arrays(poly)
        n = 1 << len(ra)
        total += n
        chunk = max(1, n // max(1, workers))
        for lo in range(0, n, chunk):
            jobs.append((poly.f, ra, rb, lo, min(n, lo + chunk)))
    if workers <= 1:
        orderable = sum(map(_census_job, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            orderable = sum(pool.map(_census_job, jobs))
    return orderable, total


def census_table(max_facets: int, workers: int = 1) -> list[tuple[int, int, int, float]]:
    rows = []
    for f in range(MIN_FACETS, max_facets + 1):
        orderable, total = census(f, workers=workers)
        rows.append((f, orderable, total, orderable / total))
    return rows


def binary_labelings(poly: CombinatorialPolytope, big_label: int = 3):
    """Every labeling with values in ``{2, big_label}``, in ascending bit order."""
    ridges = poly.sorted_ridges()
    for mask in range(1 << len(ridges)):
        yield LabeledPolytope(poly, {r: (2 if (mask >> k) & 1 else big_label) for k, r in enumerate(ridges)})
