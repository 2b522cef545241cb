"""Real root isolation for univariate rational polynomials (Sturm sequences).

Polynomials are coefficient lists, lowest degree first.
"""
from __future__ import annotations

from fractions import Fraction


def trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def evaluate(p, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p) -> list:
    return [k * c for k, c in enumerate(p)][1:]


def divmod_poly(a, b) -> tuple[list, list]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = [Fraction(c) for c in a]
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] -= c * bc
        r = trim(r)
    return q, r


def monic(p) -> list:
    p = trim(p)
    return [c / p[-1] for c in p] if p else []


def gcd_poly(a, b) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree(p) -> list:
    p = trim(p)
    if len(p) <= 2:
        return p
    g = gcd_poly(p, derivative(p))
    return monic(divmod_poly(p, g)[0]) if len(g) > 1 else monic(p)


def sturm_sequence(p) -> list[list]:
    seq = [trim(p), trim(derivative(p))]
    while seq[-1] and len(seq[-1]) > 1:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = [s for s in ((evaluate(p, x) > 0) - (evaluate(p, x) < 0) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, a, b) -> int:
    """Distinct roots in ``(a, b]`` of the first polynomial of ``seq``."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def root_bound(p) -> Fraction:
    """Cauchy bound: every root has absolute value below it."""
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_roots(p, lo, hi, tol=Fraction(1, 10**9)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint brackets ``(a, b)`` each holding one distinct real root in ``(lo, hi)``.

    A bracket with ``a == b`` is an exact rational root. Brackets are refined
    to width at most ``tol``.
    """
    lo, hi, tol = Fraction(lo), Fraction(hi), Fraction(tol)
    p = squarefree(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(p, a, b, tol))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(r for r in out if r[0] < hi)


def _refine(p, a, b, tol) -> tuple[Fraction, Fraction]:
    """Shrink ``(a, b]`` around its single root."""
    sb = evaluate(p, b)
    if sb == 0:
        return (b, b)
    while b - a > tol:
        mid = (a + b) / 2
        sm = evaluate(p, mid)
        if sm == 0:
            return (mid, mid)
        if (sm > 0) == (sb > 0):
            b, sb = mid, sm
        else:
            a = mid
    return (a, b)


def real_roots(p, lo=None, hi=None, tol=Fraction(1, 10**9)) -> list[tuple[Fraction, Fraction]]:
    p = trim(p)
    if len(p) <= 1:
        return []
    bound = root_bound(p)
    lo = -bound if lo is None else lo
    hi = bound if hi is None else hi
    return isolate_roots(p, lo, hi, tol)
