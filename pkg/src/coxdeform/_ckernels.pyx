# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernels_py``; identical signatures and results."""

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef enum:
    MAXN = 16


cdef inline int _popcount(unsigned long long x) nogil:
    return __builtin_popcountll(x)


cdef inline int _ctz(unsigned long long x) nogil:
    cdef int k = 0
    while not (x & 1):
        x >>= 1
        k += 1
    return k


cdef bint _connected(unsigned int* nbr, unsigned int nodes) nogil:
    cdef unsigned int seen, frontier, low, new
    cdef int v
    if nodes == 0:
        return True
    seen = nodes & (~nodes + 1)
    frontier = seen
    while frontier:
        low = frontier & (~frontier + 1)
        frontier ^= low
        v = _ctz(low)
        new = nbr[v] & nodes & ~seen
        seen |= new
        frontier |= new
    return seen == nodes


cdef bint _three_connected(int n, unsigned int* nbr) nogil:
    cdef unsigned int full = (1u << n) - 1
    cdef int a, b
    if n < 4 or not _connected(nbr, full):
        return False
    for a in range(n):
        for b in range(a + 1, n):
            if not _connected(nbr, full & ~((1u << a) | (1u << b))):
                return False
    return True


def is_three_connected(int n, nbr_list):
    cdef unsigned int nbr[MAXN]
    cdef int v
    for v in range(n):
        nbr[v] = nbr_list[v]
    return bool(_three_connected(n, nbr))


def filter_dual_graphs(int n):
    if n > MAXN or n * (n - 1) // 2 > 40:
        raise ValueError("n too large for the compiled kernel")
    cdef int pa[64]
    cdef int pb[64]
    cdef int npairs = 0
    cdef int a, b, k, v, ne
    for a in range(n):
        for b in range(a + 1, n):
            pa[npairs] = a
            pb[npairs] = b
            npairs += 1
    cdef int max_edges = 3 * n - 6
    cdef int min_edges = (3 * n + 1) // 2
    cdef int deg[MAXN]
    cdef unsigned int nbr[MAXN]
    cdef unsigned long long mask, m
    cdef unsigned long long limit = 1ULL << npairs
    cdef bint ok
    out = []
    mask = 0
    while mask < limit:
        ne = _popcount(mask)
        if ne <= max_edges and ne >= min_edges:
            for v in range(n):
                deg[v] = 0
                nbr[v] = 0
            m = mask
            k = 0
            while m:
                if m & 1:
                    deg[pa[k]] += 1
                    deg[pb[k]] += 1
                    nbr[pa[k]] |= 1u << pb[k]
                    nbr[pb[k]] |= 1u << pa[k]
                m >>= 1
                k += 1
            ok = deg[n - 1] >= 3
            if ok:
                for v in range(n - 1):
                    if deg[v] < deg[v + 1]:
                        ok = False
                        break
            if ok and _three_connected(n, nbr):
                out.append(mask)
        mask += 1
    return out


cdef int _greedy(int n, int e, int* ra, int* rb, unsigned long long two_mask, int* order) nogil:
    cdef int count2[MAXN]
    cdef unsigned int big[MAXN]
    cdef int k, v, pos
    cdef unsigned int remaining
    cdef bint found
    for v in range(n):
        count2[v] = 0
        big[v] = 0
    for k in range(e):
        if (two_mask >> k) & 1:
            count2[ra[k]] += 1
            count2[rb[k]] += 1
        else:
            big[ra[k]] |= 1u << rb[k]
            big[rb[k]] |= 1u << ra[k]
    remaining = (1u << n) - 1
    pos = n - 1
    while remaining:
        found = False
        for v in range(n):
            if (remaining >> v) & 1:
                if count2[v] + _popcount(big[v] & remaining) <= 3:
                    remaining &= ~(1u << v)
                    order[pos] = v
                    pos -= 1
                    found = True
                    break
        if not found:
            return 0
    return 1


def greedy_order(int n, ridge_a, ridge_b, unsigned long long two_mask):
    cdef int e = len(ridge_a)
    cdef int ra[64]
    cdef int rb[64]
    cdef int order[MAXN]
    cdef int k
    if n > MAXN or e > 64:
        raise ValueError("instance too large for the compiled kernel")
    for k in range(e):
        ra[k] = ridge_a[k]
        rb[k] = ridge_b[k]
    if not _greedy(n, e, ra, rb, two_mask, order):
        return None
    return [order[k] for k in range(n)]


def count_orderable(int n, ridge_a, ridge_b, lo=0, hi=None):
    cdef int e = len(ridge_a)
    cdef int ra[64]
    cdef int rb[64]
    cdef int order[MAXN]
    cdef int k
    cdef unsigned long long t, start, stop
    cdef long long total = 0
    if n > MAXN or e > 62:
        raise ValueError("instance too large for the compiled kernel")
    for k in range(e):
        ra[k] = ridge_a[k]
        rb[k] = ridge_b[k]
    start = lo
    stop = (1ULL << e) if hi is None else hi
    with nogil:
        t = start
        while t < stop:
            total += _greedy(n, e, ra, rb, t, order)
            t += 1
    return total
