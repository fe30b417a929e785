"""Simple undirected graphs, edge weights and boundary conditions.

Vertices are dense 0-based integers; colours are 1-based, ``1..k``.
Edge indices are the positions in :attr:`Graph.edges` and key every
per-edge quantity (weights, subset bitmasks).
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import ContractError, GraphParseError

__all__ = [
    "Graph",
    "EdgeWeights",
    "Boundary",
    "ColourClassification",
    "parse_graph",
    "serialize_graph",
    "read_graph",
    "parse_weights",
    "max_degree",
    "is_leaf_independent",
    "classify_colours",
    "disjoint_union",
]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    # incident[v] = ((neighbour, edge index), ...)
    incident: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ContractError("vertex count must be nonnegative")
        norm = []
        seen = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ContractError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ContractError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ContractError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(norm):
            inc[u].append((v, i))
            inc[v].append((u, i))
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "incident", tuple(tuple(x) for x in inc))
        object.__setattr__(self, "adjacency", tuple(tuple(v for v, _ in x) for x in inc))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: int | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edge_index(self, u: int, v: int) -> int:
        for x, i in self.incident[u]:
            if x == v:
                return i
        raise KeyError((u, v))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``; edge order is kept."""
        return Graph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adjacency), default=0)


def is_leaf_independent(g: Graph, W: Iterable[int]) -> bool:
    """True iff every vertex of ``W`` has degree one and no two are adjacent."""
    W = list(W)
    ws = set(W)
    if len(ws) != len(W):
        raise ContractError("W must consist of distinct vertices")
    for w in W:
        if not 0 <= w < g.n:
            raise ContractError(f"vertex {w} out of range")
        if g.degree(w) != 1 or g.adjacency[w][0] in ws:
            return False
    return True


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for h in graphs:
        edges.extend((u + off, v + off) for u, v in h.edges)
        off += h.n
    return Graph(off, tuple(edges))


# ---------------------------------------------------------------------------
# text formats


def parse_graph(text: str) -> Graph:
    """Parse an edge list: ``#`` comments, optional ``n <count>`` header, ``u v`` lines."""
    n_header = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or n_header is not None:
                raise GraphParseError("bad 'n <count>' header", lineno)
            try:
                n_header = int(parts[1])
            except ValueError:
                raise GraphParseError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n_header < 0:
                raise GraphParseError("negative vertex count", lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer endpoint in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex index", lineno)
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u, v))
    n = 1 + max((max(e) for e in edges), default=-1)
    if n_header is not None:
        if n_header < n:
            raise GraphParseError(f"header n={n_header} but edges use vertex {n - 1}")
        n = n_header
    return Graph(n, tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class EdgeWeights:
    """One complex weight per edge of a graph, indexed like ``Graph.edges``."""

    values: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(complex(x) for x in self.values)
        for x in vals:
            if not (math.isfinite(x.real) and math.isfinite(x.imag)):
                raise ContractError(f"non-finite edge weight {x}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, g: Graph, w: complex) -> "EdgeWeights":
        return cls((complex(w),) * g.m)

    @classmethod
    def coerce(cls, g: Graph, w) -> "EdgeWeights":
        """Accept a scalar, a per-edge sequence, an ``{(u, v): w}`` mapping or an EdgeWeights."""
        if isinstance(w, EdgeWeights):
            out = w
        elif isinstance(w, Mapping):
            vals = [None] * g.m
            for (u, v), x in w.items():
                vals[g.edge_index(u, v)] = x
            if any(x is None for x in vals):
                raise ContractError("weight mapping does not cover every edge")
            out = cls(tuple(vals))
        elif isinstance(w, (int, float, complex)):
            out = cls.uniform(g, w)
        else:
            out = cls(tuple(w))
        if len(out.values) != g.m:
            raise ContractError(f"expected {g.m} edge weights, got {len(out.values)}")
        return out

    @property
    def is_uniform(self) -> bool:
        return len(set(self.values)) <= 1

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def parse_weights(text: str, g: Graph, default: complex = 0.0) -> EdgeWeights:
    """Parse ``u v re im`` lines; edges not listed get ``default``."""
    vals = [complex(default)] * g.m
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise GraphParseError(f"expected 'u v re [im]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            re_ = float(parts[2])
            im_ = float(parts[3]) if len(parts) == 4 else 0.0
        except ValueError:
            raise GraphParseError(f"bad number in {line!r}", lineno) from None
        try:
            vals[g.edge_index(u, v)] = complex(re_, im_)
        except (KeyError, IndexError):
            raise GraphParseError(f"({u}, {v}) is not an edge of the graph", lineno) from None
    return EdgeWeights(tuple(vals))


# ---------------------------------------------------------------------------
# boundary conditions


@dataclass(frozen=True)
class Boundary:
    """Fixed vertices ``W`` with pre-assigned colours ``L`` (1-based)."""

    W: tuple[int, ...] = ()
    L: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "W", tuple(int(x) for x in self.W))
        object.__setattr__(self, "L", tuple(int(x) for x in self.L))
        if len(self.W) != len(self.L):
            raise ContractError("|W| must equal |L|")
        if len(set(self.W)) != len(self.W):
            raise ContractError("W must consist of distinct vertices")

    def validate(self, g: Graph, k: int) -> None:
        for w in self.W:
            if not 0 <= w < g.n:
                raise ContractError(f"fixed vertex {w} out of range")
        for c in self.L:
            if not 1 <= c <= k:
                raise ContractError(f"colour {c} not in [1..{k}]")

    def extend(self, u: int, colour: int) -> "Boundary":
        return Boundary(self.W + (u,), self.L + (colour,))

    def colour_of(self) -> dict[int, int]:
        return dict(zip(self.W, self.L))

    def __len__(self):
        return len(self.W)


@dataclass(frozen=True)
class ColourClassification:
    good: frozenset[int]
    neutral: frozenset[int]
    bad: frozenset[int]
    bad_multiplicity: Mapping[int, int]

    def m(self, colour: int) -> int:
        return self.bad_multiplicity.get(colour, 0)


def classify_colours(g: Graph, b: Boundary, u: int, k: int, weights, eps: float) -> ColourClassification:
    """Split ``[1..k]`` into good / neutral / bad colours for vertex ``u``.

    A colour is good when no fixed neighbour of ``u`` carries it, bad when a
    fixed neighbour joined by an edge with ``|w| <= eps`` carries it.
    """
    if u in b.W:
        raise ContractError(f"vertex {u} is fixed")
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    w = EdgeWeights.coerce(g, weights)
    fixed = b.colour_of()
    seen: set[int] = set()
    mult: dict[int, int] = {}
    for v, ei in g.incident[u]:
        if v not in fixed:
            continue
        c = fixed[v]
        seen.add(c)
        if abs(w[ei]) <= eps:
            mult[c] = mult.get(c, 0) + 1
    colours = range(1, k + 1)
    bad = frozenset(mult)
    good = frozenset(c for c in colours if c not in seen)
    neutral = frozenset(c for c in colours if c in seen and c not in bad)
    return ColourClassification(good, neutral, bad, dict(mult))


def principal_arg(z: complex) -> float:
    """Argument in (-pi, pi]."""
    a = cmath.phase(z)
    return math.pi if a == -math.pi else a
