"""Brute-force evaluators for the Potts and random cluster partition functions.

These are the oracles everything else is checked against.  Colourings are
enumerated depth-first in mixed-radix order; each step multiplies in only the
edges back to already-coloured vertices, so the per-step cost is O(deg).

Two enumeration methods share one kernel:

``"full"``
    every one of the ``k^n`` colourings of the free vertices;
``"reduced"`` (default)
    colourings modulo permutations of the colours that no fixed vertex uses,
    each weighted by the number of genuine colourings it stands for.  The
    partition function is invariant under such permutations, so both
    methods agree; the reduced one touches exponentially fewer states.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ContractError, SizeCapError
from .graph import Boundary, EdgeWeights, Graph

__all__ = [
    "CoeffVector",
    "MAX_COLOURING_VERTICES",
    "MAX_SUBSET_EDGES",
    "potts_exact",
    "potts_restricted",
    "random_cluster_exact",
    "potts_poly_in_w",
    "roots_in_w",
    "root_residual",
    "falling",
]

MAX_COLOURING_VERTICES = 16
MAX_SUBSET_EDGES = 24


def falling(x: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= x - i
    return out


@dataclass(frozen=True)
class CoeffVector:
    """Dense coefficients ``c_0..c_D`` of a univariate polynomial (constant term first)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __eq__(self, other):
        if isinstance(other, CoeffVector):
            return self.coeffs == other.coeffs
        return list(self.coeffs) == list(other)

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def to_json(self) -> list:
        if self.is_exact:
            return [str(c) for c in self.coeffs]
        return [[complex(c).real, complex(c).imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "CoeffVector":
        if isinstance(data, str):
            data = json.loads(data)
        out = []
        for x in data:
            out.append(int(x) if isinstance(x, str) else complex(x[0], x[1]))
        return cls(tuple(out))


# ---------------------------------------------------------------------------
# colouring enumeration


def _layout(g: Graph, fixed: dict[int, int]):
    """Vertex order (fixed vertices first, then BFS) and the kernel's CSR back-edge lists."""
    order = list(fixed)
    placed = set(order)
    by_degree = sorted(range(g.n), key=lambda v: -g.degree(v))
    queue: deque[int] = deque(order)
    while len(order) < g.n:
        if not queue:
            start = next(v for v in by_degree if v not in placed)
            placed.add(start)
            order.append(start)
            queue.append(start)
        x = queue.popleft()
        for y in sorted(g.adjacency[x], key=lambda v: -g.degree(v)):
            if y not in placed:
                placed.add(y)
                order.append(y)
                queue.append(y)
    pos = {v: i for i, v in enumerate(order)}
    back_ptr = [0]
    back_pos: list[int] = []
    back_edge: list[int] = []
    for v in order:
        for y, ei in g.incident[v]:
            if pos[y] < pos[v]:
                back_pos.append(pos[y])
                back_edge.append(ei)
        back_ptr.append(len(back_pos))
    return order, back_ptr, back_pos, back_edge


def _fixed_vector(order, fixed: dict[int, int]):
    return [fixed.get(v, -1) for v in order]


def _check_cap(g: Graph, b: Boundary, cap: int | None):
    cap = MAX_COLOURING_VERTICES if cap is None else cap
    free = g.n - len(b.W)
    if free > cap:
        raise SizeCapError(f"{free} free vertices exceed the colouring cap {cap}")


def _prepare(g: Graph, k: int, b: Boundary, method: str):
    """Relabel boundary colours for the kernel; returns (fixed map, n_used, n_new_max)."""
    if k < 1:
        raise ContractError("k must be at least 1")
    b.validate(g, k)
    if method == "full":
        return {w: c - 1 for w, c in zip(b.W, b.L)}, k, 0
    if method != "reduced":
        raise ValueError(f"unknown method {method!r}")
    relabel: dict[int, int] = {}
    for c in b.L:
        relabel.setdefault(c, len(relabel))
    return {w: relabel[c] for w, c in zip(b.W, b.L)}, len(relabel), k - len(relabel)


def potts_restricted(g: Graph, k: int, weights, b: Boundary | None = None, *,
                     method: str = "reduced", cap: int | None = None) -> complex:
    """Restricted partition function: sum over colourings with ``phi(W_i) = L_i``."""
    b = b or Boundary()
    w = EdgeWeights.coerce(g, weights)
    _check_cap(g, b, cap)
    fixed, n_used, n_new = _prepare(g, k, b, method)
    order, bp, bpos, bedge = _layout(g, fixed)
    sums = kernels.colouring_buckets(
        g.n, bp, bpos, bedge, _fixed_vector(order, fixed), n_used, n_new,
        [x.real for x in w.values], [x.imag for x in w.values],
    )
    if method == "full":
        return sums[0]
    free = k - n_used
    total = 0j
    for t, s in enumerate(sums):
        if s:
            total += falling(free, t) * s
    return total


def potts_exact(g: Graph, k: int, weights, *, method: str = "reduced", cap: int | None = None) -> complex:
    """``Z(G; k, (w_e))``: sum over all colourings of the product of monochromatic edge weights."""
    return potts_restricted(g, k, weights, Boundary(), method=method, cap=cap)


def potts_poly_in_w(g: Graph, k: int, b: Boundary | None = None, *,
                    method: str = "reduced", cap: int | None = None) -> CoeffVector:
    """Exact integers ``N_j`` = number of colourings with exactly ``j`` monochromatic edges."""
    b = b or Boundary()
    _check_cap(g, b, cap)
    fixed, n_used, n_new = _prepare(g, k, b, method)
    order, bp, bpos, bedge = _layout(g, fixed)
    H = kernels.colouring_hist(g.n, bp, bpos, bedge, _fixed_vector(order, fixed), n_used, n_new, g.m)
    free = k - n_used
    N = [0] * (g.m + 1)
    for t, row in enumerate(H):
        mult = 1 if method == "full" else falling(free, t)
        if mult == 0:
            continue
        for j, cnt in enumerate(row):
            N[j] += mult * int(cnt)
    return CoeffVector(tuple(N))


# ---------------------------------------------------------------------------
# random cluster model


def random_cluster_exact(g: Graph, q: complex, v, *, cap: int | None = None) -> complex:
    """``sum over F subset E of q^{c(F)} prod_{e in F} v_e``, ``c(F)`` counting isolated vertices."""
    cap = MAX_SUBSET_EDGES if cap is None else cap
    if g.m > cap:
        raise SizeCapError(f"{g.m} edges exceed the subset cap {cap}")
    vw = EdgeWeights.coerce(g, v)
    eu = [e[0] for e in g.edges]
    ev = [e[1] for e in g.edges]
    buckets = kernels.cluster_buckets(g.n, eu, ev, [x.real for x in vw.values], [x.imag for x in vw.values])
    q = complex(q)
    total = 0j
    qp = 1 + 0j
    for c in range(g.n + 1):
        if buckets[c]:
            total += qp * buckets[c]
        qp *= q
    return total


# ---------------------------------------------------------------------------
# roots


def _horner(c: Sequence[complex], z: complex):
    p = 0j
    dp = 0j
    for a in reversed(c):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def root_residual(c: Sequence, z: complex) -> float:
    """``|p(z)| / sum_i |c_i| |z|^i`` (scale-free residual)."""
    p, _ = _horner([complex(x) for x in c], z)
    scale = sum(abs(complex(x)) * abs(z) ** i for i, x in enumerate(c))
    return abs(p) / scale if scale else abs(p)


def roots_in_w(c) -> list[complex]:
    """All complex roots of ``sum c_i w^i`` with multiplicity.

    Companion-matrix eigenvalues (LAPACK ``geev`` balances the matrix first),
    then one Newton step per root, kept only if it lowers the residual.
    Low-order zero coefficients give exact roots at 0.
    """
    coeffs = list(c.coeffs if isinstance(c, CoeffVector) else c)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        raise ContractError("polynomial must have degree >= 1 after stripping trailing zeros")
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    core = [complex(x) for x in coeffs[zeros:]]
    roots: list[complex] = [0j] * zeros
    deg = len(core) - 1
    if deg == 0:
        return roots
    real = all(x.imag == 0 for x in core)
    lead = core[-1]
    comp = np.zeros((deg, deg), dtype=float if real else complex)
    row = [-x / lead for x in reversed(core[:-1])]
    comp[0, :] = [x.real for x in row] if real else row
    if deg > 1:
        comp[np.arange(1, deg), np.arange(deg - 1)] = 1.0
    eig = [complex(z) for z in np.linalg.eigvals(comp)]
    if not real:
        return roots + [_polish(core, z) for z in eig]
    # a real matrix yields exact conjugate pairs; polish one of each pair and mirror it
    for z in eig:
        if z.imag == 0:
            z = _polish(core, z)
            roots.append(complex(z.real, 0.0))
        elif z.imag > 0:
            z = _polish(core, z)
            roots.extend([z, z.conjugate()])
    return roots


def _polish(core: Sequence[complex], z: complex) -> complex:
    p, dp = _horner(core, z)
    if dp != 0:
        z2 = z - p / dp
        if root_residual(core, z2) < root_residual(core, z):
            return z2
    return z
