"""Desk-scale verification: small-graph enumeration, zero scans, induction checks, root loci."""

from __future__ import annotations

import cmath
import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .conditions import ConditionParams, check
from .errors import ContractError, SizeCapError
from .exact import potts_exact, potts_poly_in_w, potts_restricted, root_residual, roots_in_w
from .geometry import angle_between, in_disk_power
from .graph import Boundary, EdgeWeights, Graph, classify_colours, is_leaf_independent, max_degree
from .interpolation import RegionSpec, region_boundary, region_contains

__all__ = [
    "ZERO_TOL",
    "MAX_ENUM_VERTICES",
    "canonical_form",
    "canonical_graph",
    "enumerate_graphs",
    "ScanReport",
    "RegionSampler",
    "zero_free_scan",
    "weight_sweep_scan",
    "InductionReport",
    "induction_invariant_check",
    "induction_sweep",
    "RootInfo",
    "root_locus",
    "root_locus_csv",
    "region_boundary_csv",
    "thread_count",
]

ZERO_TOL = 1e-10
MAX_ENUM_VERTICES = 9
ANGLE_TOL = 1e-9
RATIO_TOL = 1e-9


def thread_count() -> int:
    """Worker threads from ``POTTS_THREADS`` (default 1); results never depend on it."""
    try:
        return max(1, int(os.environ.get("POTTS_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence):
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# graph enumeration


def _refine(n: int, adj: list[int]) -> list[int]:
    """Colour refinement from degrees; cell ids are an isomorphism invariant."""
    cell = [bin(a).count("1") for a in adj]
    while True:
        sig = [(cell[v], tuple(sorted(cell[u] for u in range(n) if adj[v] >> u & 1))) for v in range(n)]
        names = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [names[s] for s in sig]
        if len(names) == len(set(cell)):
            return new
        cell = new


def _bitmasks(g: Graph) -> list[int]:
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def canonical_form(g: Graph) -> tuple[tuple[int, int], list[int]]:
    """``((n, code), perm)``: equal keys iff the graphs are isomorphic; ``perm[i]`` is the vertex placed at i."""
    adj = _bitmasks(g)
    cell = _refine(g.n, adj)
    code, perm = kernels.canonical_code(g.n, adj, cell)
    return (g.n, int(code)), list(perm)


def canonical_graph(g: Graph) -> Graph:
    _, perm = canonical_form(g)
    pos = {v: i for i, v in enumerate(perm)}
    return Graph.from_edges(((pos[u], pos[v]) for u, v in g.edges), n=g.n)


def enumerate_graphs(n_max: int, max_deg: int, connected_only: bool = True,
                     cap: int = MAX_ENUM_VERTICES) -> Iterator[Graph]:
    """One representative per isomorphism class, by vertex count, with ``1 <= n <= n_max``.

    Level ``n`` is built from level ``n - 1`` by adding a vertex joined to a
    subset of the old vertices (a nonempty one for connected graphs: every
    connected graph has a vertex whose removal keeps it connected).
    """
    if n_max > cap:
        raise SizeCapError(f"n_max={n_max} exceeds the enumeration cap {cap}")
    if n_max < 1:
        return
    level = [Graph(1, ())]
    yield level[0]
    for n in range(2, n_max + 1):
        seen: dict[tuple[int, int], Graph] = {}
        for parent in level:
            free = [v for v in range(parent.n) if parent.degree(v) < max_deg]
            lo = 1 if connected_only else 0
            for size in range(lo, min(max_deg, len(free)) + 1):
                for S in combinations(free, size):
                    g = Graph.from_edges(parent.edges + tuple((v, n - 1) for v in S), n=n)
                    key, _ = canonical_form(g)
                    if key not in seen:
                        seen[key] = g
        level = [seen[k] for k in sorted(seen)]
        yield from level


# ---------------------------------------------------------------------------
# zero scans


class RegionSampler:
    """Weight draws from the four strata of a :class:`RegionSpec`.

    ``"i"`` and ``"ii"`` assign each edge to the small disk or the thin
    sector (80:20 towards the named one), ``"ball"`` draws every edge from
    the open disk around 1, ``"segment"`` from ``[0, 1)``.
    """

    STRATA = ("i", "ii", "ball", "segment")
    QUOTAS = (0.3, 0.3, 0.2, 0.2)

    def __init__(self, region: RegionSpec):
        self.region = region

    def disk(self, rng) -> complex:
        r = self.region.eps * math.sqrt(rng.random())
        return cmath.rect(r, 2 * math.pi * rng.random())

    def sector(self, rng) -> complex:
        e = self.region.eps
        r = e + (1 - e) * (1 - rng.random())   # (eps, 1]
        a = self.region.eps * self.region.theta * (2 * rng.random() - 1)
        return cmath.rect(r, a)

    def ball(self, rng) -> complex:
        r = self.region.radius * math.sqrt(rng.random()) * (1 - 1e-12)
        return 1 + cmath.rect(r, 2 * math.pi * rng.random())

    def draw(self, rng, m: int, stratum: str) -> list[complex]:
        if stratum in ("i", "ii"):
            lean = self.disk if stratum == "i" else self.sector
            other = self.sector if stratum == "i" else self.disk
            return [lean(rng) if rng.random() < 0.8 else other(rng) for _ in range(m)]
        if stratum == "ball":
            return [self.ball(rng) for _ in range(m)]
        if stratum == "segment":
            return [complex(rng.random()) for _ in range(m)]
        raise ValueError(f"unknown stratum {stratum!r}")

    def condition_draw(self, rng, m: int) -> list[complex]:
        """Every edge from conditions (i)/(ii) only, as required by the induction statements."""
        return self.draw(rng, m, "i" if rng.random() < 0.5 else "ii")

    @classmethod
    def schedule(cls, samples: int) -> list[str]:
        """Deterministic stratum per sample index, honouring the quotas."""
        counts = [int(samples * q) for q in cls.QUOTAS]
        for i in range(samples - sum(counts)):
            counts[i % len(counts)] += 1
        return [s for s, c in zip(cls.STRATA, counts) for _ in range(c)]


@dataclass
class ScanReport:
    graphs_tested: int
    samples_per_graph: int
    min_normalized_modulus: float
    worst_witness: tuple | None
    violations: list = field(default_factory=list)
    tolerance: float = ZERO_TOL

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        def enc(witness):
            g, ws = witness
            return {"n": g.n, "edges": [list(e) for e in g.edges], "weights": [[w.real, w.imag] for w in ws]}

        return {
            "graphs_tested": self.graphs_tested,
            "samples_per_graph": self.samples_per_graph,
            "min_normalized_modulus": self.min_normalized_modulus if math.isfinite(self.min_normalized_modulus) else None,
            "tolerance": self.tolerance,
            "worst_witness": enc(self.worst_witness) if self.worst_witness else None,
            "violations": [dict(enc((g, ws)), modulus=mod) for g, ws, mod in self.violations],
            "passed": self.passed,
        }


def _scan(graphs: Sequence[Graph], k: int, draws: Callable[[int, Graph], list[list[complex]]],
          samples: int) -> ScanReport:
    def one(item):
        idx, g = item
        best = (math.inf, None)
        bad = []
        for ws in draws(idx, g):
            mod = abs(potts_exact(g, k, ws)) / float(k) ** g.n
            if mod < best[0]:
                best = (mod, ws)
            if not mod > ZERO_TOL:
                bad.append((g, ws, mod))
        return best, bad

    results = _map(one, list(enumerate(graphs)))
    low, witness, violations = math.inf, None, []
    for g, ((mod, ws), bad) in zip(graphs, results):
        if ws is not None and mod < low:
            low, witness = mod, (g, ws)
        violations.extend(bad)
    return ScanReport(len(graphs), samples, low, witness, violations)


def zero_free_scan(delta: int, k: int, region: RegionSpec, n_max: int, samples: int, seed: int,
                   graphs: Iterable[Graph] | None = None) -> ScanReport:
    """Evaluate ``|Z|/k^n`` on stratified region draws for every graph; passes iff all exceed 1e-10.

    By default the graphs are all connected graphs with at most ``n_max``
    vertices and maximum degree at most ``delta``.  Draws for graph number
    ``i`` come from a generator seeded with ``(seed, i)``.
    """
    graphs = list(enumerate_graphs(n_max, delta) if graphs is None else graphs)
    sampler = RegionSampler(region)
    plan = RegionSampler.schedule(samples)

    def draws(idx, g):
        rng = np.random.default_rng([seed, idx])
        return [sampler.draw(rng, g.m, s) for s in plan]

    return _scan(graphs, k, draws, samples)


def weight_sweep_scan(graphs: Iterable[Graph], k: int, ws: Sequence[complex]) -> ScanReport:
    """Like :func:`zero_free_scan` with uniform weights taken from ``ws``."""
    graphs = list(graphs)
    return _scan(graphs, k, lambda idx, g: [[complex(w)] * g.m for w in ws], len(ws))


# ---------------------------------------------------------------------------
# induction invariants


@dataclass
class InductionReport:
    instances: int = 0
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def tally(self, kind: str, ok: bool, detail=None) -> None:
        self.checks[kind] = self.checks.get(kind, 0) + 1
        if not ok:
            self.violations.append((kind, detail))

    def merge(self, other: "InductionReport") -> None:
        self.instances += other.instances
        for kind, c in other.checks.items():
            self.checks[kind] = self.checks.get(kind, 0) + c
        self.violations.extend(other.violations)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "checks": dict(sorted(self.checks.items())),
            "violations": [{"kind": k, "detail": repr(d)} for k, d in self.violations],
            "passed": self.passed,
        }


def _in_weight_conditions(w: complex, eps: float, theta: float) -> bool:
    a = abs(w)
    return a <= eps or (a <= 1 and abs(cmath.phase(w)) <= eps * theta)


def _validate_instance(g, k, weights, boundary, u, p, system):
    w = EdgeWeights.coerce(g, weights)
    if max_degree(g) > p.delta:
        raise ContractError("graph degree exceeds Delta")
    if not p.eps > 0:
        raise ContractError("the induction statements need eps > 0")
    if not check(system, p).holds:
        raise ContractError(f"parameters fail the {system} conditions")
    if not all(_in_weight_conditions(x, p.eps, p.theta) for x in w.values):
        raise ContractError("weights outside conditions (i)/(ii)")
    boundary.validate(g, k)
    if not is_leaf_independent(g, boundary.W):
        raise ContractError("W' must be leaf-independent")
    if u in boundary.W or not 0 <= u < g.n:
        raise ContractError("u must be a free vertex")
    return w


def _colour_values(g, k, w, boundary, u):
    """``x[l] = Z^{W',u}_{L',l}`` for every colour; colours unused by ``L'`` share one evaluation."""
    used = sorted(set(boundary.L))
    x = {}
    for c in used:
        x[c] = potts_restricted(g, k, w, boundary.extend(u, c))
    spare = [c for c in range(1, k + 1) if c not in used]
    if spare:
        val = potts_restricted(g, k, w, boundary.extend(u, spare[0]))
        for c in spare:
            x[c] = val
    return x


def _check_instance(g, k, w, boundary, u, p, system, report, pairs=None):
    x = _colour_values(g, k, w, boundary, u)
    free_scale = float(k) ** (g.n - len(boundary.W))
    theta = p.theta
    cls = classify_colours(g, boundary, u, k, w, p.eps)
    good, neutral = cls.good, cls.neutral
    d = sum(1 for v in g.adjacency[u] if v not in boundary.W)
    b = p.delta - d
    tag = (g.edges, tuple(boundary.W), tuple(boundary.L), u)

    total = potts_restricted(g, k, w, boundary)
    s = sum(x.values())
    report.tally("restriction_sum", abs(s - total) <= 1e-10 * max(abs(total), sum(abs(v) for v in x.values())),
                 (tag, s, total))

    gn = sorted(good | neutral)
    for l in gn:
        report.tally("C(i)", abs(x[l]) / free_scale > ZERO_TOL, (tag, l, x[l]))
    for l, l2 in combinations(gn, 2):
        ang = angle_between(x[l], x[l2]) if x[l] and x[l2] else math.inf
        report.tally("C(ii)", ang <= (d + b * p.eps) * theta + ANGLE_TOL, (tag, l, l2, ang))
    for l, j in permutations(sorted(good), 2):
        r = x[l] / x[j]
        if d == 0:
            report.tally("C(iii)", abs(r - 1) <= 1e-12, (tag, l, j, r))
        else:
            report.tally("C(iii)", in_disk_power(r, p.K, d), (tag, l, j, r))
    for l in range(1, k + 1):
        mult = cls.m(l)
        for j in sorted(good):
            bound = p.eps ** mult * (1 + p.K) ** d
            report.tally("C'(iii)", abs(x[l]) <= bound * abs(x[j]) * (1 + RATIO_TOL), (tag, l, j, abs(x[l] / x[j])))

    W = list(boundary.W) + [u]
    if is_leaf_independent(g, W):
        todo = pairs if pairs is not None else permutations(range(1, k + 1), 2)
        for l, l2 in todo:
            xa, ya = x[l], x[l2]
            ang = angle_between(xa, ya)
            report.tally("B(i)", ang <= theta + ANGLE_TOL, (tag, l, l2, ang))
            r = xa / ya
            report.tally("B(ii)", abs(r - 1) < p.K * (1 + RATIO_TOL), (tag, l, l2, r))
            report.tally("B'(ii)", abs(r) <= (1 + p.K) * (1 + RATIO_TOL), (tag, l, l2, abs(r)))
    report.instances += 1


def induction_invariant_check(g: Graph, k: int, weights, boundary: Boundary, u: int, ell: int, ell2: int,
                              p: ConditionParams, system: str = "improved") -> InductionReport:
    """Check the induction conclusions for ``W = W'u`` (``boundary`` holds ``W'``, ``L'``).

    B(i), B(ii) and B'(ii) are checked for the pair ``(ell, ell2)`` when
    ``W'u`` is leaf-independent; C(i)-(iii) and C'(iii) are checked for
    every colour at ``u``, together with the restriction-sum identity.
    """
    w = _validate_instance(g, k, weights, boundary, u, p, system)
    if not (1 <= ell <= k and 1 <= ell2 <= k):
        raise ContractError("colours must lie in 1..k")
    report = InductionReport()
    pairs = [(ell, ell2)]
    _check_instance(g, k, w, boundary, u, p, system, report, pairs)
    return report


def _growth_strings(length: int, k: int) -> Iterator[tuple[int, ...]]:
    """Colour lists up to renaming of colours: first appearances in order 1, 2, ..."""
    def rec(prefix, top):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for c in range(1, min(top + 1, k) + 1):
            yield from rec(prefix + [c], max(top, c))
    yield from rec([], 0)


def induction_sweep(graphs: Iterable[Graph], k: int, p: ConditionParams, draws: int, seed: int,
                    max_fixed: int = 3, system: str = "improved") -> InductionReport:
    """Exhaustive induction checks over boundaries ``W = W'u`` with ``|W| <= max_fixed``.

    ``W'`` ranges over leaf-independent vertex sets, ``L'`` over colour lists
    up to renaming (the partition function is invariant under permuting
    colours), ``u`` over the free vertices.  Weights are drawn from
    conditions (i)/(ii) of the region with the parameters' eps and theta.
    """
    graphs = list(graphs)
    if not p.eps > 0:
        raise ContractError("the induction statements need eps > 0")
    sampler = RegionSampler(RegionSpec(p.delta, p.eps, p.theta, 0.1))

    def one(item):
        idx, g = item
        rep = InductionReport()
        rng = np.random.default_rng([seed, idx])
        leaves = [v for v in range(g.n) if g.degree(v) == 1]
        bases = [W for r in range(0, max_fixed) for W in combinations(leaves, r) if is_leaf_independent(g, W)]
        for _ in range(draws):
            ws = sampler.condition_draw(rng, g.m)
            w = EdgeWeights.coerce(g, ws)
            for Wp in bases:
                for Lp in _growth_strings(len(Wp), k):
                    bd = Boundary(tuple(Wp), Lp)
                    for u in range(g.n):
                        if u in Wp:
                            continue
                        _check_instance(g, k, w, bd, u, p, system, rep)
        return rep

    if not check(system, p).holds:
        raise ContractError(f"parameters fail the {system} conditions")
    total = InductionReport()
    for rep in _map(one, list(enumerate(graphs))):
        total.merge(rep)
    return total


# ---------------------------------------------------------------------------
# root loci


@dataclass(frozen=True)
class RootInfo:
    root: complex
    in_region: bool
    residual: float


def root_locus(g: Graph, k: int, region: RegionSpec | None) -> list[RootInfo]:
    """Roots of ``w -> Z(G; k, w)`` with their region flags and scale-free residuals."""
    N = potts_poly_in_w(g, k)
    coeffs = list(N.coeffs)
    out = []
    for z in roots_in_w(N):
        flag = region_contains(region, z) if region is not None else False
        out.append(RootInfo(z, flag, root_residual(coeffs, z)))
    return out


def root_locus_csv(roots: Iterable[RootInfo]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["re", "im", "in_region"])
    for r in roots:
        wr.writerow([repr(r.root.real), repr(r.root.imag), str(r.in_region).lower()])
    return buf.getvalue()


def region_boundary_csv(region: RegionSpec, samples: int = 256) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["re", "im"])
    for x, y in region_boundary(region, samples):
        wr.writerow([repr(float(x)), repr(float(y))])
    return buf.getvalue()
