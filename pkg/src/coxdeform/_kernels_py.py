"""Pure-Python hot loops; same API as the compiled ``_ckernels`` module.

Graphs are encoded as bitmasks over the pairs of ``itertools.combinations(range(n), 2)``;
nodes are 0-based here.
"""
from itertools import combinations


def _pairs(n):
    return list(combinations(range(n), 2))


def _connected(nbr, nodes):
    if nodes == 0:
        return True
    start = nodes & -nodes
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        v = low.bit_length() - 1
        new = nbr[v] & nodes & ~seen
        seen |= new
        frontier |= new
    return seen == nodes


def is_three_connected(n, nbr):
    full = (1 << n) - 1
    if n < 4 or not _connected(nbr, full):
        return False
    for a in range(n):
        for b in range(a + 1, n):
            if not _connected(nbr, full & ~((1 << a) | (1 << b))):
                return False
    return True


def filter_dual_graphs(n):
    """Edge masks of candidate dual graphs on ``n`` nodes.

    Keeps graphs with minimum degree >= 3, at most ``3n - 6`` edges, degrees
    non-increasing in node index (every isomorphism class keeps a member) and
    3-connectivity. Planarity is left to the caller.
    """
    pairs = _pairs(n)
    npairs = len(pairs)
    max_edges = 3 * n - 6
    min_edges = (3 * n + 1) // 2
    out = []
    for mask in range(1 << npairs):
        ne = bin(mask).count("1")
        if ne > max_edges or ne < min_edges:
            continue
        deg = [0] * n
        nbr = [0] * n
        m = mask
        k = 0
        while m:
            if m & 1:
                a, b = pairs[k]
                deg[a] += 1
                deg[b] += 1
                nbr[a] |= 1 << b
                nbr[b] |= 1 << a
            m >>= 1
            k += 1
        ok = deg[n - 1] >= 3
        for v in range(n - 1):
            if deg[v] < deg[v + 1]:
                ok = False
                break
        if ok and is_three_connected(n, nbr):
            out.append(mask)
    return out


def greedy_order(n, ridge_a, ridge_b, two_mask):
    """Reverse greedy elimination; returns the order (0-based) or ``None``.

    Bit ``k`` of ``two_mask`` set means ridge ``k`` carries label 2.
    """
    count2 = [0] * n
    big = [0] * n
    for k in range(len(ridge_a)):
        a, b = ridge_a[k], ridge_b[k]
        if (two_mask >> k) & 1:
            count2[a] += 1
            count2[b] += 1
        else:
            big[a] |= 1 << b
            big[b] |= 1 << a
    remaining = (1 << n) - 1
    removed = []
    while remaining:
        for v in range(n):
            if (remaining >> v) & 1:
                others = big[v] & remaining
                if count2[v] + bin(others).count("1") <= 3:
                    remaining &= ~(1 << v)
                    removed.append(v)
                    break
        else:
            return None
    removed.reverse()
    return removed


def count_orderable(n, ridge_a, ridge_b, lo=0, hi=None):
    """Number of labelings in ``[lo, hi)`` accepted by :func:`greedy_order`."""
    e = len(ridge_a)
    if hi is None:
        hi = 1 << e
    total = 0
    for two_mask in range(lo, hi):
        if greedy_order(n, ridge_a, ridge_b, two_mask) is not None:
            total += 1
    return total
