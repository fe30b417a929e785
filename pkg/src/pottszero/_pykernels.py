"""Pure-Python enumeration kernels.

Reference implementation and fallback for :mod:`pottszero._ckernels`; every
function here has an identically named, identically behaving compiled twin.

Colouring kernels work on *positions* ``0..n-1`` (the caller has already
chosen a vertex order).  ``back_ptr/back_pos/back_edge`` is a CSR list of, for
each position ``i``, the earlier positions adjacent to it and the connecting
edge index.  ``fixed[i]`` is ``-1`` for a free position, otherwise a colour
index in ``[0, n_used)``.

Free positions range over the ``n_used`` explicit colours plus "new" colours
introduced in order of first appearance, at most ``n_new_max`` of them.  With
``n_new_max = 0`` and ``n_used = k`` this is the plain ``k^n`` enumeration;
otherwise each reduced colouring with ``t`` new colours stands for
``falling(k - n_used, t)`` genuine colourings.
"""

from __future__ import annotations



class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    def value(self) -> float:
        return self.s + self.c


def colouring_buckets(n, back_ptr, back_pos, back_edge, fixed, n_used, n_new_max, wre, wim):
    """Sum of edge-weight products over reduced colourings, bucketed by new-colour count.

    Returns a list of complex ``S_t`` for ``t = 0..min(n_new_max, n)``.
    Subtrees whose partial product is exactly zero are skipped.
    """
    w = [complex(a, b) for a, b in zip(wre, wim)]
    tmax = min(n_new_max, n)
    acc_re = [_Neumaier() for _ in range(tmax + 1)]
    acc_im = [_Neumaier() for _ in range(tmax + 1)]
    col = [0] * n

    def rec(i, t, prod):
        if i == n:
            acc_re[t].add(prod.real)
            acc_im[t].add(prod.imag)
            return
        f = fixed[i]
        if f >= 0:
            choices = (f,)
        else:
            choices = range(n_used + t + (1 if t < n_new_max else 0))
        lo, hi = back_ptr[i], back_ptr[i + 1]
        for c in choices:
            p = prod
            for idx in range(lo, hi):
                if col[back_pos[idx]] == c:
                    p *= w[back_edge[idx]]
            if p == 0:
                continue
            col[i] = c
            rec(i + 1, t + 1 if (f < 0 and c == n_used + t) else t, p)

    if n == 0:
        return [1 + 0j] + [0j] * tmax
    rec(0, 0, 1 + 0j)
    return [complex(acc_re[t].value(), acc_im[t].value()) for t in range(tmax + 1)]


def colouring_hist(n, back_ptr, back_pos, back_edge, fixed, n_used, n_new_max, n_edges):
    """Counts ``H[t][j]`` of reduced colourings with ``t`` new colours and ``j`` monochromatic edges."""
    tmax = min(n_new_max, n)
    H = [[0] * (n_edges + 1) for _ in range(tmax + 1)]
    col = [0] * n

    def rec(i, t, mono):
        if i == n:
            H[t][mono] += 1
            return
        f = fixed[i]
        if f >= 0:
            choices = (f,)
        else:
            choices = range(n_used + t + (1 if t < n_new_max else 0))
        lo, hi = back_ptr[i], back_ptr[i + 1]
        for c in choices:
            extra = 0
            for idx in range(lo, hi):
                if col[back_pos[idx]] == c:
                    extra += 1
            col[i] = c
            rec(i + 1, t + 1 if (f < 0 and c == n_used + t) else t, mono + extra)

    if n == 0:
        H[0][0] = 1
        return H
    rec(0, 0, 0)
    return H


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def cluster_buckets(n, eu, ev, vre, vim):
    """``S_c = sum over edge subsets F with c components of prod_{e in F} v_e``, c = 0..n.

    Include/exclude recursion over edges with a union-find that supports
    rollback (union by size, no path compression).
    """
    m = len(eu)
    v = [complex(a, b) for a, b in zip(vre, vim)]
    parent = list(range(n))
    size = [1] * n
    acc_re = [_Neumaier() for _ in range(n + 1)]
    acc_im = [_Neumaier() for _ in range(n + 1)]

    def rec(i, comps, prod):
        if i == m:
            acc_re[comps].add(prod.real)
            acc_im[comps].add(prod.imag)
            return
        rec(i + 1, comps, prod)
        p = prod * v[i]
        if p == 0:
            return
        a = _find(parent, eu[i])
        b = _find(parent, ev[i])
        if a == b:
            rec(i + 1, comps, p)
            return
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        rec(i + 1, comps - 1, p)
        size[a] -= size[b]
        parent[b] = b

    rec(0, n, 1 + 0j)
    return [complex(acc_re[c].value(), acc_im[c].value()) for c in range(n + 1)]


def cluster_hist(n, eu, ev, max_size):
    """Exact counts ``H[s][c]`` of edge subsets of size ``s <= max_size`` with ``c`` components."""
    m = len(eu)
    parent = list(range(n))
    size = [1] * n
    H = [[0] * (n + 1) for _ in range(max_size + 1)]

    def rec(i, s, comps):
        if i == m:
            H[s][comps] += 1
            return
        rec(i + 1, s, comps)
        if s == max_size:
            return
        a = _find(parent, eu[i])
        b = _find(parent, ev[i])
        if a == b:
            rec(i + 1, s + 1, comps)
            return
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        rec(i + 1, s + 1, comps - 1)
        size[a] -= size[b]
        parent[b] = b

    rec(0, 0, n)
    return H


def connected_clusters(n, eu, ev, max_size):
    """Connected edge subsets of size ``1..max_size``, aggregated by (vertex bitmask, size).

    Each subset is generated exactly once, rooted at its minimum-index edge
    ``e0``: candidate edges (index > e0, touching the current subset) are
    branched exclude/include, and an excluded edge stays banned in its branch.
    """
    m = len(eu)
    inc = [[] for _ in range(n)]
    for i in range(m):
        inc[eu[i]].append(i)
        inc[ev[i]].append(i)
    out: dict[tuple[int, int], int] = {}

    def rec(e0, emask, vmask, size, cand, banned):
        if size == max_size or not cand:
            key = (vmask, size)
            out[key] = out.get(key, 0) + 1
            return
        f = cand[0]
        rest = cand[1:]
        rec(e0, emask, vmask, size, rest, banned | (1 << f))
        emask |= 1 << f
        busy = emask | banned
        for x in rest:
            busy |= 1 << x
        grown = list(rest)
        for g in inc[eu[f]] + inc[ev[f]]:
            if g > e0 and not (busy >> g) & 1:
                busy |= 1 << g
                grown.append(g)
        rec(e0, emask, vmask | (1 << eu[f]) | (1 << ev[f]), size + 1, grown, banned)

    if max_size < 1:
        return out
    for e0 in range(m):
        cand = []
        for g in inc[eu[e0]] + inc[ev[e0]]:
            if g > e0 and g not in cand:
                cand.append(g)
        rec(e0, 1 << e0, (1 << eu[e0]) | (1 << ev[e0]), 1, cand, 0)
    return out


def canonical_code(n, adj, cell):
    """Minimum adjacency code over vertex orders that list cells in increasing order.

    ``adj[v]`` is a neighbour bitmask, ``cell[v]`` an isomorphism-invariant
    cell index.  The code concatenates, for ``b = 1..n-1`` and ``a < b``, the
    bit ``adj(perm[a], perm[b])``; an earlier position is more significant.
    Returns ``(code, perm)`` where ``perm[i]`` is the vertex at position i.
    """
    if n <= 1:
        return 0, list(range(n))
    cells = sorted(set(cell))
    slots = []
    for c in cells:
        slots.extend([c] * sum(1 for x in cell if x == c))
    total_bits = n * (n - 1) // 2
    best = [None, None]
    perm = [0] * n
    used = [False] * n

    def rec(i, code):
        # code holds the bits of columns 1..i-1, left-aligned within total_bits
        if best[0] is not None:
            shift = total_bits - i * (i - 1) // 2
            if (code >> shift) > (best[0] >> shift):
                return
        if i == n:
            if best[0] is None or code < best[0]:
                best[0] = code
                best[1] = perm[:]
            return
        want = slots[i]
        base = i * (i - 1) // 2
        for v in range(n):
            if used[v] or cell[v] != want:
                continue
            col = 0
            a = adj[v]
            for j in range(i):
                col = (col << 1) | ((a >> perm[j]) & 1)
            newcode = code | (col << (total_bits - base - i))
            used[v] = True
            perm[i] = v
            rec(i + 1, newcode)
            used[v] = False

    rec(0, 0)
    return best[0], best[1]


KERNEL_BACKEND = "python"
