import math
import random

import networkx as nx
import numpy as np
import pytest

from pottszero.conditions import IMPROVED_ROWS, ConditionParams, max_eps
from pottszero.errors import ContractError, SizeCapError
from pottszero.graph import Boundary, Graph
from pottszero.harness import (
    RegionSampler,
    canonical_form,
    canonical_graph,
    enumerate_graphs,
    induction_invariant_check,
    induction_sweep,
    region_boundary_csv,
    root_locus,
    root_locus_csv,
    weight_sweep_scan,
    zero_free_scan,
)
from pottszero.interpolation import RegionSpec, region_contains

from oracles import random_graph

K3 = Graph(3, ((0, 1), (1, 2), (0, 2)))
P3 = Graph(3, ((0, 1), (1, 2)))


def _params(eps_frac=0.5):
    K, _, k = IMPROVED_ROWS[3]
    return ConditionParams(3, k, eps_frac * max_eps("improved", 3, k, K), K)


def test_enumeration_examples():
    small = list(enumerate_graphs(3, 2))
    assert len(small) == 4
    assert sorted((g.n, g.m) for g in small) == [(1, 0), (2, 1), (3, 2), (3, 3)]
    assert len(list(enumerate_graphs(4, 3))) == 10
    edgeless = list(enumerate_graphs(5, 0, connected_only=False))
    assert [g.n for g in edgeless] == [1, 2, 3, 4, 5] and all(g.m == 0 for g in edgeless)
    assert [g.n for g in enumerate_graphs(5, 0)] == [1]
    with pytest.raises(SizeCapError):
        list(enumerate_graphs(10, 3))


def test_enumeration_matches_atlas():
    atlas = nx.graph_atlas_g()[1:]
    for connected in (True, False):
        for delta in (2, 3, 4, 6):
            want = {}
            for h in atlas:
                if h.number_of_nodes() == 0 or (connected and not nx.is_connected(h)):
                    continue
                if max((d for _, d in h.degree()), default=0) <= delta:
                    want[h.number_of_nodes()] = want.get(h.number_of_nodes(), 0) + 1
            got = {}
            for g in enumerate_graphs(7, delta, connected_only=connected):
                got[g.n] = got.get(g.n, 0) + 1
            assert got == want


def test_enumeration_yields_pairwise_non_isomorphic_graphs():
    graphs = [g for g in enumerate_graphs(6, 3) if g.n == 6]
    nxg = [nx.Graph(list(g.edges)) for g in graphs]
    for i in range(len(nxg)):
        for j in range(i + 1, len(nxg)):
            if nxg[i].number_of_edges() == nxg[j].number_of_edges():
                assert not nx.is_isomorphic(nxg[i], nxg[j])


def test_canonical_form_invariant_under_relabelling():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 8)
        g = Graph(n, tuple(random_graph(rng, n, 14)))
        perm = list(range(n))
        rng.shuffle(perm)
        h = Graph.from_edges(((perm[u], perm[v]) for u, v in g.edges), n=n)
        assert canonical_form(g)[0] == canonical_form(h)[0]
        assert set(canonical_graph(g).edges) == set(canonical_graph(h).edges)
        assert nx.is_isomorphic(nx.Graph(list(g.edges)), nx.Graph(list(canonical_graph(g).edges)))


def test_scan_self_test_finds_triangle_zero():
    region = RegionSpec(3, 0.1, 0.4, 0.18)
    rep = weight_sweep_scan([K3], 2, [0])
    assert not rep.passed and rep.min_normalized_modulus == 0
    rep = zero_free_scan(3, 2, region, 3, 4, 0, graphs=[K3])
    assert rep.graphs_tested == 1 and rep.samples_per_graph == 4


def test_scan_small_region_is_zero_free_and_reproducible():
    region = RegionSpec.certified(3, 6, radius=0.18)
    a = zero_free_scan(3, 6, region, 5, 40, 11)
    b = zero_free_scan(3, 6, region, 5, 40, 11)
    c = zero_free_scan(3, 6, region, 5, 40, 12)
    assert a.passed and a.min_normalized_modulus > 1e-10
    assert a.to_dict() == b.to_dict()
    assert a.min_normalized_modulus != c.min_normalized_modulus
    assert a.graphs_tested == len(list(enumerate_graphs(5, 3)))
    assert bool(a.violations) == (a.min_normalized_modulus <= 1e-10)


def test_real_weight_sweep():
    graphs = list(enumerate_graphs(7, 3))
    rep = weight_sweep_scan(graphs, 6, [0.05 * j for j in range(20)])
    assert rep.passed and rep.min_normalized_modulus > 0


def test_sampler_draws_stay_in_region():
    region = RegionSpec.certified(3, 6, radius=0.18)
    s = RegionSampler(region)
    rng = np.random.default_rng(0)
    for stratum in RegionSampler.STRATA:
        for w in s.draw(rng, 2000, stratum):
            assert region_contains(region, w)
    sched = RegionSampler.schedule(200)
    assert [sched.count(x) for x in RegionSampler.STRATA] == [60, 60, 40, 40]
    assert len(RegionSampler.schedule(7)) == 7


def test_induction_trivial_examples():
    p = _params()
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    b = Boundary((0,), (1,))
    rep = induction_invariant_check(g, 6, [0.5, 0.5, 0.5], b, 3, 3, 3, p)
    assert rep.passed and rep.checks["B(i)"] == 1
    rep = induction_invariant_check(g, 6, [1, 1, 1], b, 3, 2, 5, p)
    assert rep.passed and rep.checks["B(ii)"] == 1


def test_induction_unit_weights_give_exact_symmetry():
    # with every weight 1 the restricted values do not depend on the colours at all
    from pottszero.exact import potts_restricted
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    b = Boundary((0,), (1,))
    vals = {potts_restricted(g, 6, [1, 1, 1], b.extend(1, c)) for c in range(1, 7)}
    assert vals == {6.0 ** 2}


def test_induction_contracts():
    p = _params()
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    with pytest.raises(ContractError):          # both ends of an edge fixed
        induction_invariant_check(g, 6, [0.5] * 3, Boundary((1,), (1,)), 2, 1, 2, p)
    with pytest.raises(ContractError):          # weight outside (i)/(ii)
        induction_invariant_check(g, 6, [0.5j] * 3, Boundary((0,), (1,)), 1, 1, 2, p)
    with pytest.raises(ContractError):          # u already fixed
        induction_invariant_check(g, 6, [0.5] * 3, Boundary((0,), (1,)), 0, 1, 2, p)
    with pytest.raises(ContractError):          # parameters fail the conditions
        induction_invariant_check(g, 5, [0.5] * 3, Boundary((0,), (1,)), 1, 1, 2,
                                  ConditionParams(3, 5, 0.01, 0.4))
    with pytest.raises(ContractError):
        induction_invariant_check(g, 6, [0.5] * 3, Boundary((0,), (1,)), 1, 1, 2, ConditionParams(3, 6, 0.0, 0.4124))


def test_induction_sweep_small():
    p = _params()
    graphs = list(enumerate_graphs(5, 3))
    rep = induction_sweep(graphs, 6, p, 3, 1)
    assert rep.passed
    assert rep.checks["restriction_sum"] == rep.instances > 0
    for kind in ("B(i)", "B(ii)", "B'(ii)", "C(i)", "C(ii)", "C(iii)", "C'(iii)"):
        assert rep.checks.get(kind, 0) > 0
    assert rep.to_dict() == induction_sweep(graphs, 6, p, 3, 1).to_dict()


def test_root_locus_examples():
    region = RegionSpec.certified(3, 6, radius=0.18)
    (r,) = root_locus(Graph(2, ((0, 1),)), 3, region)
    assert abs(r.root + 2) < 1e-12 and not r.in_region
    roots = sorted(root_locus(K3, 2, region), key=lambda x: x.root.imag)
    assert [abs(x.root - z) < 1e-12 for x, z in zip(roots, [-1j * math.sqrt(3), 0, 1j * math.sqrt(3)])] == [True] * 3
    # the small disk is closed, so the exact root at 0 counts as inside
    assert [x.in_region for x in roots] == [False, True, False]


def test_root_locus_small_graphs_outside_region():
    region = RegionSpec.certified(3, 6, radius=0.18)
    for g in enumerate_graphs(5, 3):
        if g.m == 0:
            continue
        for info in root_locus(g, 6, region):
            assert not info.in_region and info.residual <= 1e-8


def test_csv_headers():
    region = RegionSpec(3, 0.1, 0.4, 0.18)
    text = root_locus_csv(root_locus(K3, 2, region))
    lines = text.splitlines()
    assert lines[0] == "re,im,in_region" and len(lines) == 4
    assert {ln.rsplit(",", 1)[1] for ln in lines[1:]} == {"true", "false"}
    b = region_boundary_csv(region, 32).splitlines()
    assert b[0] == "re,im" and len(b) > 32


def test_scan_independent_of_thread_count(monkeypatch):
    region = RegionSpec.certified(3, 6, radius=0.18)
    monkeypatch.setenv("POTTS_THREADS", "1")
    a = zero_free_scan(3, 6, region, 5, 30, 1).to_dict()
    monkeypatch.setenv("POTTS_THREADS", "3")
    b = zero_free_scan(3, 6, region, 5, 30, 1).to_dict()
    assert a == b
