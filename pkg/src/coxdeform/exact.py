"""Small exact linear algebra over ``Fraction``; matrices are tuples of row tuples."""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("refusing to convert a float to an exact rational")
    return Fraction(x)


def vec(xs) -> tuple:
    return tuple(frac(x) for x in xs)


def mat(rows) -> tuple:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matmul(a, b) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(dot(r, c) for c in cols) for r in a)


def matvec(a, v) -> tuple:
    return tuple(dot(r, v) for r in a)


def rowmat(v, a) -> tuple:
    """Row vector ``v`` times matrix ``a``."""
    return tuple(dot(v, c) for c in zip(*a))


def outer(v, a) -> tuple:
    return tuple(tuple(x * y for y in a) for x in v)


def sub(a, b) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def row_reduce(rows):
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                k = m[i][c]
                m[i] = [x - k * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def kernel(rows, ncols: int | None = None) -> list[tuple]:
    """Basis of the right kernel, one vector per free column (leftmost pivots)."""
    if ncols is None:
        ncols = len(rows[0])
    red, piv = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for r, pc in zip(red, piv):
            x[pc] = -r[fc]
        basis.append(tuple(x))
    return basis


def det(a) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                k = m[i][c] / m[c][c]
                m[i] = [x - k * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a) -> tuple:
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, identity(n))]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in red)


def solve(a, b) -> tuple:
    return matvec(inverse(a), b)


def det_generic(a, zero, one):
    """Leibniz expansion for tiny matrices over any commutative ring."""
    n = len(a)
    total = zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = one
        for i in range(n):
            term = term * a[i][perm[i]]
        total = total + term if sign > 0 else total - term
    return total


def adjugate_generic(a, zero, one):
    n = len(a)
    adj = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det_generic(minor, zero, one) if minor else one
            adj[j][i] = cof if (i + j) % 2 == 0 else zero - cof
    return adj
