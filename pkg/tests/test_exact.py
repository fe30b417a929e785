import cmath
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from pottszero.errors import ContractError, SizeCapError
from pottszero.exact import (
    CoeffVector,
    falling,
    potts_exact,
    potts_poly_in_w,
    potts_restricted,
    random_cluster_exact,
    root_residual,
    roots_in_w,
)
from pottszero.graph import Boundary, Graph, disjoint_union

from oracles import (
    poly_counts_brute,
    potts_brute,
    random_complex,
    random_graph,
    relerr,
)

EDGE = Graph(2, ((0, 1),))
K3 = Graph(3, ((0, 1), (1, 2), (0, 2)))


def test_single_edge_and_triangle():
    for k in range(1, 6):
        for w in (0, 0.5, 1 + 2j):
            assert abs(potts_exact(EDGE, k, w) - k * (k - 1 + w)) < 1e-12
    assert potts_exact(EDGE, 3, 0) == 6
    assert potts_exact(K3, 3, 0) == 6
    assert potts_exact(Graph(4, ((0, 1), (2, 3))), 5, 1) == 5 ** 4


def test_restricted_examples():
    w = 0.3 + 0.1j
    assert potts_restricted(EDGE, 4, w, Boundary((0, 1), (1, 1))) == w
    assert potts_restricted(EDGE, 4, w, Boundary((0, 1), (1, 2))) == 1
    assert potts_restricted(K3, 4, w, Boundary()) == potts_exact(K3, 4, w)


def test_random_cluster_examples():
    q = 2.5 - 1j
    assert abs(random_cluster_exact(Graph(3, ()), q, []) - q ** 3) < 1e-12
    k, w = 4, 0.2 + 0.3j
    assert abs(random_cluster_exact(EDGE, k, w - 1) - k * (k - 1 + w)) < 1e-12
    assert abs(random_cluster_exact(K3, 3, -1) - 6) < 1e-12


def test_poly_examples():
    assert potts_poly_in_w(K3, 2) == [0, 6, 0, 2]
    for k in range(1, 6):
        assert potts_poly_in_w(EDGE, k) == [k * (k - 1), k]
    N = potts_poly_in_w(K3, 2)
    assert N.is_exact and N.to_json() == ["0", "6", "0", "2"]
    assert CoeffVector.from_json(N.to_json()) == N


def test_roots_examples():
    for k in (2, 3, 5):
        (r,) = roots_in_w([k * (k - 1), k])
        assert abs(r - (1 - k)) < 1e-12
    roots = sorted(roots_in_w([0, 6, 0, 2]), key=lambda z: z.imag)
    assert roots[1] == 0
    assert abs(roots[0] + 1j * math.sqrt(3)) < 1e-12 and abs(roots[2] - 1j * math.sqrt(3)) < 1e-12
    with pytest.raises(ContractError):
        roots_in_w([5])
    with pytest.raises(ContractError):
        roots_in_w([0, 0])


def test_methods_agree_with_brute_force():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 6)
        edges = random_graph(rng, n)
        g = Graph(n, tuple(edges))
        k = rng.randint(1, 4)
        ws = [random_complex(rng) for _ in edges]
        fixed = {v: rng.randint(1, k) for v in rng.sample(range(n), rng.randint(0, min(3, n)))}
        b = Boundary(tuple(fixed), tuple(fixed.values()))
        ref = potts_brute(n, edges, k, ws, fixed)
        for method in ("full", "reduced"):
            assert relerr(potts_restricted(g, k, ws, b, method=method), ref) < 1e-10 or abs(ref) < 1e-12
        assert relerr(random_cluster_exact(g, k, [w - 1 for w in ws]), potts_brute(n, edges, k, ws)) < 1e-9
        N = potts_poly_in_w(g, k, method=rng.choice(["full", "reduced"]))
        assert list(N) == poly_counts_brute(n, edges, k)


def test_caps():
    big = Graph(20, tuple((i, i + 1) for i in range(19)))
    with pytest.raises(SizeCapError):
        potts_exact(big, 3, 0)
    assert potts_exact(big, 3, 0, cap=20) == 3 * 2 ** 19
    dense = Graph(8, tuple((u, v) for u in range(8) for v in range(u + 1, 8)))
    with pytest.raises(SizeCapError):
        random_cluster_exact(dense, 3, -1)


def test_contract_errors():
    with pytest.raises(ContractError):
        potts_exact(K3, 0, 0)
    with pytest.raises(ContractError):
        potts_restricted(K3, 2, 0, Boundary((0,), (3,)))
    with pytest.raises(ContractError):
        potts_exact(K3, 3, [0, 0])


def test_falling():
    assert falling(5, 0) == 1 and falling(5, 2) == 20 and falling(2, 3) == 0


@st.composite
def small_graphs(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, tuple(edges))


complexes = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=80, deadline=None)
@given(small_graphs(), st.integers(1, 5), st.data())
def test_identity_and_poly_properties(g, k, data):
    ws = data.draw(st.lists(complexes, min_size=g.m, max_size=g.m))
    z = potts_exact(g, k, ws)
    rc = random_cluster_exact(g, k, [w - 1 for w in ws])
    assert abs(z - rc) <= 1e-9 * max(abs(z), 1.0)
    N = potts_poly_in_w(g, k)
    assert all(isinstance(c, int) and c >= 0 for c in N)
    assert sum(N) == k ** g.n
    assert N.evaluate(1) == k ** g.n
    w = data.draw(complexes)
    assert abs(N.evaluate(w) - potts_exact(g, k, w)) <= 1e-9 * max(1.0, sum(N) * max(1, abs(w)) ** g.m)


@settings(max_examples=40, deadline=None)
@given(small_graphs(4), small_graphs(4), st.integers(1, 4), complexes)
def test_multiplicative_over_disjoint_union(g, h, k, w):
    u = disjoint_union(g, h)
    assert abs(potts_exact(u, k, w) - potts_exact(g, k, w) * potts_exact(h, k, w)) <= \
        1e-9 * max(1.0, abs(potts_exact(u, k, w)))


@settings(max_examples=60, deadline=None)
@given(small_graphs(6), st.integers(1, 5), st.data())
def test_restriction_sum(g, k, data):
    ws = data.draw(st.lists(complexes, min_size=g.m, max_size=g.m))
    W = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=g.n - 1))
    L = data.draw(st.lists(st.integers(1, k), min_size=len(W), max_size=len(W)))
    u = data.draw(st.sampled_from([v for v in range(g.n) if v not in W]))
    b = Boundary(tuple(W), tuple(L))
    parts = [potts_restricted(g, k, ws, b.extend(u, j)) for j in range(1, k + 1)]
    whole = potts_restricted(g, k, ws, b)
    assert abs(sum(parts) - whole) <= 1e-10 * max(1.0, sum(abs(x) for x in parts))


def test_poly_evaluation_matches_exact_on_random_w():
    rng = random.Random(5)
    g = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)))
    N = potts_poly_in_w(g, 4)
    for _ in range(20):
        w = random_complex(rng)
        assert relerr(N.evaluate(w), potts_exact(g, 4, w)) < 1e-10


def test_root_residuals_and_multiplicity():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 7)
        g = Graph(n, tuple(random_graph(rng, n)))
        if g.m == 0:
            continue
        N = potts_poly_in_w(g, rng.randint(2, 6))
        roots = roots_in_w(N)
        deg = max(i for i, c in enumerate(N) if c)
        assert len(roots) == deg
        assert max(root_residual(list(N), z) for z in roots) <= 1e-8
        # conjugation symmetry of the root set
        for z in roots:
            assert min(abs(z.conjugate() - y) for y in roots) <= 1e-8 * max(1, abs(z))


def test_root_residual_definition():
    assert root_residual([1, 1], -1) == 0
    assert root_residual([2, 0, 1], 1) == pytest.approx(1.0)
    assert cmath.isclose(roots_in_w([-2, 1])[0], 2)
