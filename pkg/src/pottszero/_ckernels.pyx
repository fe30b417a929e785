# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_pykernels`` for the reference semantics."""

from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport int64_t, uint64_t

KERNEL_BACKEND = "cython"


cdef inline void _neu_add(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if (s[0] if s[0] >= 0 else -s[0]) >= (x if x >= 0 else -x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef int* _ivec(object seq, Py_ssize_t extra=0) except NULL:
    cdef Py_ssize_t n = len(seq), i
    cdef int* out = <int*> malloc((n + extra + 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = seq[i]
    return out


cdef double* _dvec(object seq) except NULL:
    cdef Py_ssize_t n = len(seq), i
    cdef double* out = <double*> malloc((n + 1) * sizeof(double))
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = seq[i]
    return out


cdef void _colour_sum(int n, const int* bptr, const int* bpos, const int* bedge,
                      const int* fixed, int n_used, int n_new_max,
                      const double* wre, const double* wim,
                      double* acc) noexcept nogil:
    # acc[4*t .. 4*t+3] = (re sum, re comp, im sum, im comp)
    cdef int* col = <int*> calloc(n + 1, sizeof(int))
    cdef int* t_at = <int*> calloc(n + 1, sizeof(int))
    cdef int* nxt = <int*> calloc(n + 1, sizeof(int))
    cdef double* pr = <double*> calloc(n + 1, sizeof(double))
    cdef double* pi = <double*> calloc(n + 1, sizeof(double))
    cdef int i = 0, c, lim, idx, t, f
    cdef double a, b, xr, xi
    pr[0] = 1.0
    pi[0] = 0.0
    t_at[0] = 0
    nxt[0] = -1
    while i >= 0:
        if i == n:
            t = t_at[n]
            _neu_add(&acc[4 * t], &acc[4 * t + 1], pr[n])
            _neu_add(&acc[4 * t + 2], &acc[4 * t + 3], pi[n])
            i -= 1
            continue
        f = fixed[i]
        t = t_at[i]
        # advance colour choice at position i
        if nxt[i] < 0:
            c = f if f >= 0 else 0
        else:
            c = nxt[i]
            if f >= 0:
                nxt[i] = -1
                i -= 1
                continue
        lim = n_used + t + (1 if t < n_new_max else 0)
        if c >= lim:
            nxt[i] = -1
            i -= 1
            continue
        nxt[i] = c + 1
        a = pr[i]
        b = pi[i]
        for idx in range(bptr[i], bptr[i + 1]):
            if col[bpos[idx]] == c:
                xr = a * wre[bedge[idx]] - b * wim[bedge[idx]]
                xi = a * wim[bedge[idx]] + b * wre[bedge[idx]]
                a = xr
                b = xi
        if a == 0.0 and b == 0.0:
            continue
        col[i] = c
        pr[i + 1] = a
        pi[i + 1] = b
        t_at[i + 1] = t + 1 if (f < 0 and c == n_used + t) else t
        nxt[i + 1] = -1
        i += 1
    free(col); free(t_at); free(nxt); free(pr); free(pi)


def colouring_buckets(int n, back_ptr, back_pos, back_edge, fixed, int n_used, int n_new_max, wre, wim):
    cdef int tmax = n_new_max if n_new_max < n else n
    if n == 0:
        return [1 + 0j] + [0j] * tmax
    cdef int* bptr = _ivec(back_ptr)
    cdef int* bpos = _ivec(back_pos)
    cdef int* bedge = _ivec(back_edge)
    cdef int* fx = _ivec(fixed)
    cdef double* r = _dvec(wre)
    cdef double* im = _dvec(wim)
    cdef double* acc = <double*> calloc(4 * (tmax + 1), sizeof(double))
    with nogil:
        _colour_sum(n, bptr, bpos, bedge, fx, n_used, n_new_max, r, im, acc)
    out = [complex(acc[4 * t] + acc[4 * t + 1], acc[4 * t + 2] + acc[4 * t + 3]) for t in range(tmax + 1)]
    free(bptr); free(bpos); free(bedge); free(fx); free(r); free(im); free(acc)
    return out


cdef void _colour_hist(int n, const int* bptr, const int* bpos, const int* fixed,
                       int n_used, int n_new_max, int n_edges, int64_t* H) noexcept nogil:
    cdef int* col = <int*> calloc(n + 1, sizeof(int))
    cdef int* t_at = <int*> calloc(n + 1, sizeof(int))
    cdef int* mono = <int*> calloc(n + 1, sizeof(int))
    cdef int* nxt = <int*> calloc(n + 1, sizeof(int))
    cdef int i = 0, c, lim, idx, t, f, extra
    nxt[0] = -1
    while i >= 0:
        if i == n:
            H[t_at[n] * (n_edges + 1) + mono[n]] += 1
            i -= 1
            continue
        f = fixed[i]
        t = t_at[i]
        if nxt[i] < 0:
            c = f if f >= 0 else 0
        else:
            c = nxt[i]
            if f >= 0:
                nxt[i] = -1
                i -= 1
                continue
        lim = n_used + t + (1 if t < n_new_max else 0)
        if c >= lim:
            nxt[i] = -1
            i -= 1
            continue
        nxt[i] = c + 1
        extra = 0
        for idx in range(bptr[i], bptr[i + 1]):
            if col[bpos[idx]] == c:
                extra += 1
        col[i] = c
        mono[i + 1] = mono[i] + extra
        t_at[i + 1] = t + 1 if (f < 0 and c == n_used + t) else t
        nxt[i + 1] = -1
        i += 1
    free(col); free(t_at); free(mono); free(nxt)


def colouring_hist(int n, back_ptr, back_pos, back_edge, fixed, int n_used, int n_new_max, int n_edges):
    cdef int tmax = n_new_max if n_new_max < n else n
    if n == 0:
        H0 = [[0] * (n_edges + 1) for _ in range(tmax + 1)]
        H0[0][0] = 1
        return H0
    cdef int* bptr = _ivec(back_ptr)
    cdef int* bpos = _ivec(back_pos)
    cdef int* fx = _ivec(fixed)
    cdef int64_t* H = <int64_t*> calloc((tmax + 1) * (n_edges + 1), sizeof(int64_t))
    with nogil:
        _colour_hist(n, bptr, bpos, fx, n_used, n_new_max, n_edges, H)
    out = [[H[t * (n_edges + 1) + j] for j in range(n_edges + 1)] for t in range(tmax + 1)]
    free(bptr); free(bpos); free(fx); free(H)
    return out


cdef inline int _find(const int* parent, int x) noexcept nogil:
    while parent[x] != x:
        x = parent[x]
    return x


cdef void _cluster_sum(int n, int m, const int* eu, const int* ev,
                       const double* vre, const double* vim, double* acc) noexcept nogil:
    # explicit stack over edges; state[i]: 0 = exclude branch next, 1 = include next, 2 = done
    cdef int* state = <int*> calloc(m + 1, sizeof(int))
    cdef int* comps = <int*> calloc(m + 1, sizeof(int))
    cdef int* merged = <int*> calloc(m + 1, sizeof(int))   # child root merged at depth i, or -1
    cdef int* parent = <int*> malloc((n + 1) * sizeof(int))
    cdef int* size = <int*> malloc((n + 1) * sizeof(int))
    cdef double* pr = <double*> calloc(m + 1, sizeof(double))
    cdef double* pi = <double*> calloc(m + 1, sizeof(double))
    cdef int i = 0, a, b, x, c
    cdef double xr, xi
    for x in range(n):
        parent[x] = x
        size[x] = 1
    pr[0] = 1.0
    comps[0] = n
    state[0] = 0
    while i >= 0:
        if i == m:
            c = comps[m]
            _neu_add(&acc[4 * c], &acc[4 * c + 1], pr[m])
            _neu_add(&acc[4 * c + 2], &acc[4 * c + 3], pi[m])
            i -= 1
            continue
        if state[i] == 0:
            state[i] = 1
            pr[i + 1] = pr[i]
            pi[i + 1] = pi[i]
            comps[i + 1] = comps[i]
            state[i + 1] = 0
            merged[i] = -1
            i += 1
            continue
        if state[i] == 1:
            state[i] = 2
            xr = pr[i] * vre[i] - pi[i] * vim[i]
            xi = pr[i] * vim[i] + pi[i] * vre[i]
            if xr == 0.0 and xi == 0.0:
                i -= 1
                continue
            a = _find(parent, eu[i])
            b = _find(parent, ev[i])
            pr[i + 1] = xr
            pi[i + 1] = xi
            if a == b:
                merged[i] = -1
                comps[i + 1] = comps[i]
            else:
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
                merged[i] = b
                comps[i + 1] = comps[i] - 1
            state[i + 1] = 0
            i += 1
            continue
        # state 2: undo the include branch and pop
        b = merged[i]
        if b >= 0:
            a = parent[b]
            size[a] -= size[b]
            parent[b] = b
            merged[i] = -1
        i -= 1
    free(state); free(comps); free(merged); free(parent); free(size); free(pr); free(pi)


def cluster_buckets(int n, eu, ev, vre, vim):
    cdef int m = len(eu)
    cdef int* u = _ivec(eu)
    cdef int* v = _ivec(ev)
    cdef double* r = _dvec(vre)
    cdef double* im = _dvec(vim)
    cdef double* acc = <double*> calloc(4 * (n + 1), sizeof(double))
    with nogil:
        _cluster_sum(n, m, u, v, r, im, acc)
    out = [complex(acc[4 * c] + acc[4 * c + 1], acc[4 * c + 2] + acc[4 * c + 3]) for c in range(n + 1)]
    free(u); free(v); free(r); free(im); free(acc)
    return out


cdef void _cluster_hist(int n, int m, const int* eu, const int* ev, int max_size, int64_t* H) noexcept nogil:
    cdef int* state = <int*> calloc(m + 1, sizeof(int))
    cdef int* comps = <int*> calloc(m + 1, sizeof(int))
    cdef int* sz = <int*> calloc(m + 1, sizeof(int))
    cdef int* merged = <int*> calloc(m + 1, sizeof(int))
    cdef int* parent = <int*> malloc((n + 1) * sizeof(int))
    cdef int* size = <int*> malloc((n + 1) * sizeof(int))
    cdef int i = 0, a, b, x
    for x in range(n):
        parent[x] = x
        size[x] = 1
    comps[0] = n
    while i >= 0:
        if i == m:
            H[sz[m] * (n + 1) + comps[m]] += 1
            i -= 1
            continue
        if state[i] == 0:
            state[i] = 1
            comps[i + 1] = comps[i]
            sz[i + 1] = sz[i]
            state[i + 1] = 0
            merged[i] = -1
            i += 1
            continue
        if state[i] == 1:
            state[i] = 2
            if sz[i] == max_size:
                i -= 1
                continue
            a = _find(parent, eu[i])
            b = _find(parent, ev[i])
            sz[i + 1] = sz[i] + 1
            if a == b:
                merged[i] = -1
                comps[i + 1] = comps[i]
            else:
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
                merged[i] = b
                comps[i + 1] = comps[i] - 1
            state[i + 1] = 0
            i += 1
            continue
        b = merged[i]
        if b >= 0:
            a = parent[b]
            size[a] -= size[b]
            parent[b] = b
            merged[i] = -1
        state[i] = 0
        i -= 1
    free(state); free(comps); free(sz); free(merged); free(parent); free(size)


def cluster_hist(int n, eu, ev, int max_size):
    cdef int m = len(eu)
    cdef int* u = _ivec(eu)
    cdef int* v = _ivec(ev)
    cdef int64_t* H = <int64_t*> calloc((max_size + 1) * (n + 1), sizeof(int64_t))
    with nogil:
        _cluster_hist(n, m, u, v, max_size, H)
    out = [[H[s * (n + 1) + c] for c in range(n + 1)] for s in range(max_size + 1)]
    free(u); free(v); free(H)
    return out


def connected_clusters(int n, eu, ev, int max_size):
    cdef int m = len(eu)
    if m > 64 or n > 64:
        from . import _pykernels
        return _pykernels.connected_clusters(n, eu, ev, max_size)
    out = {}
    if max_size < 1:
        return out
    cdef uint64_t[64] touch
    cdef int i, e0
    cdef uint64_t one = 1
    for i in range(m):
        touch[i] = 0
    inc = [[] for _ in range(n)]
    for i in range(m):
        inc[eu[i]].append(i)
        inc[ev[i]].append(i)
    for i in range(m):
        for g in inc[eu[i]] + inc[ev[i]]:
            if g != i:
                touch[i] |= one << g
    cdef uint64_t[64] vbits
    for i in range(m):
        vbits[i] = (one << <int> eu[i]) | (one << <int> ev[i])
    for e0 in range(m):
        _grow(e0, m, one << e0, vbits[e0], 1, touch[e0] & _above(e0), 0, max_size, touch, vbits, out)
    return out


cdef inline uint64_t _above(int e0):
    # bitmask of edge indices strictly greater than e0
    if e0 >= 63:
        return 0
    return ~((<uint64_t> 1 << (e0 + 1)) - 1)


cdef void _grow(int e0, int m, uint64_t emask, uint64_t vmask, int size, uint64_t cand,
                uint64_t banned, int max_size, uint64_t* touch, uint64_t* vbits, dict out):
    # candidates are taken lowest index first; the set of generated subsets does not
    # depend on the order, only its duplicate-freeness does (guaranteed by banning)
    cdef int f
    cdef uint64_t rest, add
    cdef uint64_t one = 1
    while True:
        if size == max_size or cand == 0:
            key = (vmask, size)
            out[key] = out.get(key, 0) + 1
            return
        f = _lowbit(cand)
        rest = cand & ~(one << f)
        add = touch[f] & _above(e0) & ~(emask | banned | rest | (one << f))
        _grow(e0, m, emask | (one << f), vmask | vbits[f], size + 1, rest | add, banned, max_size,
              touch, vbits, out)
        # exclude branch continues iteratively
        banned |= one << f
        cand = rest


cdef inline int _lowbit(uint64_t x):
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


def canonical_code(int n, adj, cell):
    if n <= 1:
        return 0, list(range(n))
    if n > 11:
        from . import _pykernels
        return _pykernels.canonical_code(n, adj, cell)
    cdef uint64_t[12] a
    cdef int[12] cl, slots, perm, bestperm, used
    cdef int i, j, c
    for i in range(n):
        a[i] = adj[i]
        cl[i] = cell[i]
        used[i] = 0
    order = sorted(range(n), key=lambda v: cell[v])
    for i in range(n):
        slots[i] = cell[order[i]]
    cdef int total = n * (n - 1) // 2
    cdef uint64_t best = 0
    cdef int have = 0
    _canon(0, 0, n, total, a, cl, slots, perm, used, &best, &have, bestperm)
    return int(best), [bestperm[i] for i in range(n)]


cdef void _canon(int i, uint64_t code, int n, int total, uint64_t* adj, int* cl, int* slots,
                 int* perm, int* used, uint64_t* best, int* have, int* bestperm) noexcept nogil:
    cdef int shift, v, j, base
    cdef uint64_t col, newcode
    if have[0]:
        shift = total - i * (i - 1) // 2
        if (code >> shift) > (best[0] >> shift):
            return
    if i == n:
        if not have[0] or code < best[0]:
            best[0] = code
            have[0] = 1
            for j in range(n):
                bestperm[j] = perm[j]
        return
    base = i * (i - 1) // 2
    for v in range(n):
        if used[v] or cl[v] != slots[i]:
            continue
        col = 0
        for j in range(i):
            col = (col << 1) | ((adj[v] >> perm[j]) & 1)
        newcode = code | (col << (total - base - i))
        used[v] = 1
        perm[i] = v
        _canon(i + 1, newcode, n, total, adj, cl, slots, perm, used, best, have, bestperm)
        used[v] = 0
