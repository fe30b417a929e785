"""The compiled and pure-Python kernels must agree exactly (counts) or to rounding (sums)."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from pottszero import kernels
from pottszero.exact import _layout, _fixed_vector
from pottszero.graph import Graph

from oracles import random_graph

compiled = kernels.compiled
pure = kernels.pure
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def _layouts(seed, count=40, n_max=7):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, n_max)
        g = Graph(n, tuple(random_graph(rng, n)))
        k = rng.randint(1, 5)
        fixed = {}
        for v in rng.sample(range(n), rng.randint(0, min(2, n))):
            fixed[v] = rng.randint(0, k - 1)
        yield rng, g, k, fixed


def test_backend_flag():
    assert kernels.BACKEND in ("python", "cython")
    assert pure.KERNEL_BACKEND == "python"
    if compiled is not None:
        assert compiled.KERNEL_BACKEND == "cython"


@needs_ext
def test_colouring_kernels_agree():
    for rng, g, k, fixed in _layouts(1):
        order, bp, bpos, bedge = _layout(g, fixed)
        wre = [rng.uniform(-1, 1) for _ in range(g.m)]
        wim = [rng.uniform(-1, 1) for _ in range(g.m)]
        dense = {c: i for i, c in enumerate(sorted(set(fixed.values())))}
        configs = [
            (_fixed_vector(order, fixed), k, 0),
            (_fixed_vector(order, {v: dense[c] for v, c in fixed.items()}), len(dense), k - len(dense)),
        ]
        for fv, n_used, n_new in configs:
            a = pure.colouring_buckets(g.n, bp, bpos, bedge, fv, n_used, n_new, wre, wim)
            b = compiled.colouring_buckets(g.n, bp, bpos, bedge, fv, n_used, n_new, wre, wim)
            assert len(a) == len(b)
            for x, y in zip(a, b):
                assert abs(x - y) <= 1e-12 * max(1.0, abs(x))
            ha = pure.colouring_hist(g.n, bp, bpos, bedge, fv, n_used, n_new, g.m)
            hb = compiled.colouring_hist(g.n, bp, bpos, bedge, fv, n_used, n_new, g.m)
            assert [list(map(int, r)) for r in ha] == [list(map(int, r)) for r in hb]


@needs_ext
def test_cluster_kernels_agree():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 7)
        edges = random_graph(rng, n, 12)
        eu = [e[0] for e in edges]
        ev = [e[1] for e in edges]
        vre = [rng.uniform(-1, 1) for _ in edges]
        vim = [rng.uniform(-1, 1) for _ in edges]
        a = pure.cluster_buckets(n, eu, ev, vre, vim)
        b = compiled.cluster_buckets(n, eu, ev, vre, vim)
        for x, y in zip(a, b):
            assert abs(x - y) <= 1e-12 * max(1.0, abs(x))
        M = rng.randint(0, len(edges))
        assert [list(map(int, r)) for r in pure.cluster_hist(n, eu, ev, M)] == \
               [list(map(int, r)) for r in compiled.cluster_hist(n, eu, ev, M)]
        assert pure.connected_clusters(n, eu, ev, M) == compiled.connected_clusters(n, eu, ev, M)


@needs_ext
@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.data())
def test_canonical_code_agrees(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    cell = [bin(a).count("1") for a in adj]
    ca, pa = pure.canonical_code(n, adj, cell)
    cb, pb = compiled.canonical_code(n, adj, cell)
    assert int(ca) == int(cb)


def test_connected_clusters_small_cases():
    # path 0-1-2: clusters {e0}, {e1}, {e0, e1}
    out = pure.connected_clusters(3, [0, 1], [1, 2], 2)
    assert out == {(0b011, 1): 1, (0b110, 1): 1, (0b111, 2): 1}
    # triangle, all connected subsets: 3 singles, 3 pairs, 1 triple
    out = pure.connected_clusters(3, [0, 1, 0], [1, 2, 2], 3)
    assert sum(out.values()) == 7 and out[(0b111, 2)] == 3 and out[(0b111, 3)] == 1
