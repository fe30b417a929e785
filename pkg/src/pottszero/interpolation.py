"""Approximate evaluation of the Potts partition function by polynomial interpolation.

For a target weight ``w`` put ``q(z) = Z(G; k, 1 + z (w - 1))``, so that
``q(0) = k^n`` and ``q(1) = Z(G; k, w)``.  The random cluster expansion gives
``q(z) = sum_m (w - 1)^m e_m z^m`` with ``e_m = sum_{|F| = m} k^{c(F)}``.
If ``q`` has no zeros on a disk containing 0 and 1, the Taylor series of
``log q`` around 0 converges at 1 and a few low-order coefficients suffice.

An optional polynomial map ``p`` with ``p(0) = 0``, ``p(1) = 1`` reshapes the
disk first (``f = q o p``); with ``N = 1`` it is the identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from .conditions import IMPROVED_ROWS, best_K, check, max_eps, ConditionParams
from .errors import ContractError, DiskMapError, SizeCapError
from .exact import CoeffVector
from .graph import Graph, max_degree

__all__ = [
    "RegionSpec",
    "InterpolationPlan",
    "Diagnostics",
    "default_radius",
    "region_contains",
    "region_boundary",
    "edge_subset_sums",
    "q_coefficients",
    "disk_map",
    "compose_truncate",
    "log_taylor",
    "exp_taylor",
    "first_escape",
    "approx_Z",
    "BACKENDS",
    "MAX_SUBSETS",
]

BACKENDS = ("subset", "connected-cluster")
MAX_SUBSETS = 1 << 24


def default_radius(max_degree: int) -> float:
    """Radius of the disk around 1 known to be zero-free: 0.18, 0.13, then 0.52/Delta."""
    if max_degree <= 3:
        return 0.18
    if max_degree == 4:
        return 0.13
    return 0.52 / max_degree


@dataclass(frozen=True)
class RegionSpec:
    """Union of the small disk ``|w| <= eps``, the thin sector
    ``|arg w| <= eps*theta, eps < |w| <= 1`` and the open disk ``|1 - w| < radius``.
    """

    max_degree: int
    eps: float
    theta: float
    radius: float

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ContractError("region eps must lie in (0, 1)")
        if self.theta <= 0 or self.radius <= 0:
            raise ContractError("region theta and radius must be positive")

    @classmethod
    def certified(cls, max_degree: int, k: float, K: float | None = None,
                  radius: float | None = None, system: str = "improved") -> "RegionSpec":
        """Region from a feasible point of a condition system at ``(max_degree, k)``.

        ``K`` defaults to the tabulated value when it is feasible at ``k``, else
        to the margin-maximising ``K``; ``eps`` is the largest eps keeping the
        conditions (bisection).
        """
        D = max(max_degree, 3)
        if K is None:
            row = IMPROVED_ROWS.get(D)
            if row and check(system, ConditionParams(D, k, 0.0, row[0])).holds:
                K = row[0]
            else:
                K = best_K(system, D, k)[0]
        eps = max_eps(system, D, k, K)
        if eps <= 0:
            raise ContractError(f"no certified region for Delta={D}, k={k}, K={K}")
        return cls(D, eps, math.asin(K), default_radius(D) if radius is None else radius)

    def contains(self, w: complex) -> bool:
        return region_contains(self, w)

    def where(self, w: complex) -> str | None:
        """Name of the first sub-region containing ``w`` ("i", "ii", "ball"), or None."""
        w = complex(w)
        a = abs(w)
        if a <= self.eps:
            return "i"
        if a <= 1 and abs(cmath.phase(w)) <= self.eps * self.theta:
            return "ii"
        if abs(1 - w) < self.radius:
            return "ball"
        return None


def region_contains(r: RegionSpec, w: complex) -> bool:
    return r.where(w) is not None


def region_boundary(r: RegionSpec, samples: int = 256) -> list[tuple[float, float]]:
    """Closed polyline tracing the small disk, the sector and the disk around 1 (one after another)."""
    out = []
    t = np.linspace(0, 2 * np.pi, samples + 1)
    out += [(r.eps * math.cos(x), r.eps * math.sin(x)) for x in t]
    a = r.eps * r.theta
    s = np.linspace(-a, a, max(samples // 4, 2))
    out += [(r.eps * math.cos(-a), r.eps * math.sin(-a))]
    out += [(math.cos(x), math.sin(x)) for x in s]
    out += [(r.eps * math.cos(a), r.eps * math.sin(a))]
    out += [(1 + r.radius * math.cos(x), r.radius * math.sin(x)) for x in t]
    return out


@dataclass(frozen=True)
class InterpolationPlan:
    """``M`` = truncation order (None: adaptive), ``rho``/``N`` = disk map, ``backend`` for e_m.

    ``disk_margin`` is the extra radius delta' used by the optional
    containment check (``check_region``).
    """

    M: int | None = None
    rho: float = 0.5
    N: int = 1
    backend: str = "subset"
    disk_margin: float = 0.05
    check_region: bool = False

    def __post_init__(self):
        if self.M is not None and self.M < 1:
            raise ContractError("M must be >= 1")
        if not 0 < self.rho < 1:
            raise ContractError("rho must lie in (0, 1)")
        if self.N < 1:
            raise ContractError("N must be >= 1")
        if self.backend not in BACKENDS:
            raise ContractError(f"backend must be one of {BACKENDS}")


# ---------------------------------------------------------------------------
# coefficients


def _subset_sums(g: Graph, k: int, M: int, cap: int) -> list[int]:
    work = sum(comb(g.m, s) for s in range(M + 1))
    if work > cap:
        raise SizeCapError(f"{work} edge subsets exceed the cap {cap}")
    H = kernels.cluster_hist(g.n, [e[0] for e in g.edges], [e[1] for e in g.edges], M)
    kp = [k ** c for c in range(g.n + 1)]
    return [sum(int(cnt) * kp[c] for c, cnt in enumerate(row)) for row in H]


def _cluster_sums(g: Graph, k: int, M: int) -> list[int]:
    """Assemble e_m from connected edge sets via a vertex-mask recursion.

    ``F(mask)`` is the generating table ``{(edges, merged): count}`` of
    forests of vertex-disjoint clusters inside ``mask``; ``merged`` counts
    ``|V(C)| - 1`` summed over the clusters, so a subset with ``m`` edges and
    ``r`` merged vertices has ``n - r`` components.
    """
    if g.n > 62:
        raise SizeCapError("connected-cluster backend supports at most 62 vertices")
    clusters = kernels.connected_clusters(g.n, [e[0] for e in g.edges], [e[1] for e in g.edges], M)
    by_low: dict[int, list[tuple[int, int, int, int]]] = {}
    for (vmask, size), cnt in sorted(clusters.items()):
        low = (vmask & -vmask).bit_length() - 1
        by_low.setdefault(low, []).append((vmask, size, bin(vmask).count("1") - 1, int(cnt)))

    memo: dict[int, dict[tuple[int, int], int]] = {0: {(0, 0): 1}}

    def F(mask):
        if mask in memo:
            return memo[mask]
        low = (mask & -mask).bit_length() - 1
        acc = dict(F(mask & ~(1 << low)))
        for vmask, size, merged, cnt in by_low.get(low, ()):
            if vmask & ~mask:
                continue
            for (s, r), c in F(mask & ~vmask).items():
                if s + size <= M:
                    key = (s + size, r + merged)
                    acc[key] = acc.get(key, 0) + c * cnt
        memo[mask] = acc
        return acc

    # recursion depth is at most n
    table = F((1 << g.n) - 1)
    e = [0] * (M + 1)
    for (s, r), c in table.items():
        e[s] += c * k ** (g.n - r)
    return e


def edge_subset_sums(g: Graph, k: int, M: int, backend: str = "subset", cap: int = MAX_SUBSETS) -> list[int]:
    """Exact ``e_m = sum_{|F| = m} k^{c(F)}`` for ``m = 0..M``."""
    if not 0 <= M <= g.m:
        raise ContractError(f"M must lie in [0, |E|={g.m}]")
    if backend == "subset":
        return _subset_sums(g, k, M, cap)
    if backend == "connected-cluster":
        return _cluster_sums(g, k, M)
    raise ContractError(f"backend must be one of {BACKENDS}")


def q_coefficients(g: Graph, k: int, w: complex, M: int, backend: str = "subset",
                   e: Sequence[int] | None = None) -> list[complex]:
    """``a_m = (w - 1)^m e_m``; the integer ``e_m`` is converted to float only at the final product."""
    if e is None:
        e = edge_subset_sums(g, k, M, backend)
    base = complex(w) - 1
    out = []
    power = 1 + 0j
    for m in range(M + 1):
        out.append(power * e[m] if e[m] else 0j)
        power *= base
    return out


# ---------------------------------------------------------------------------
# series manipulation


def disk_map(rho: float, N: int, region: RegionSpec | None = None, w: complex | None = None,
             disk_margin: float = 0.05, samples: int = 720) -> CoeffVector:
    """Coefficients ``p_0..p_N`` (``p_0 = 0``) of ``g(rho z) / g(rho)``, ``g(y) = sum_{j<=N} y^j / j``.

    With ``region`` and ``w`` given, the circle of radius ``1 + disk_margin``
    is sampled and every image ``1 + p(z) (w - 1)`` must lie in the region;
    otherwise :class:`DiskMapError` names the first escaping sample.
    """
    if not 0 < rho < 1:
        raise ContractError("rho must lie in (0, 1)")
    if N < 1:
        raise ContractError("N must be >= 1")
    raw = [rho ** j / j for j in range(1, N + 1)]
    total = math.fsum(raw)
    coeffs = [x / total for x in raw]
    # pin p(1) = 1 against rounding in the normalisation
    coeffs[-1] = 1.0 - math.fsum(coeffs[:-1])
    p = CoeffVector((0.0, *coeffs))
    if region is not None:
        if w is None:
            raise ContractError("containment check needs the target weight w")
        bad = first_escape(p, region, w, disk_margin, samples)
        if bad is not None:
            j, z, image = bad
            raise DiskMapError(
                f"boundary sample {j} (z={z:.6g}) maps to w={image:.6g}, outside the region",
                witness=bad,
            )
    return p


def first_escape(p: CoeffVector, region: RegionSpec, w: complex, disk_margin: float = 0.05,
                 samples: int = 720):
    """First ``(j, z, image)`` on the circle ``|z| = 1 + disk_margin`` whose image leaves the region."""
    base = complex(w) - 1
    R = 1 + disk_margin
    for j in range(samples):
        z = cmath.rect(R, 2 * math.pi * j / samples)
        image = 1 + p.evaluate(z) * base
        if not region_contains(region, image):
            return j, z, image
    return None


def compose_truncate(a: Sequence[complex], p: Sequence[complex], M: int) -> list[complex]:
    """Coefficients ``b_0..b_M`` of ``q(p(z))`` where ``p(0) = 0``."""
    p = np.asarray(list(p), dtype=complex)
    if p.size and p[0] != 0:
        raise ContractError("the inner polynomial must have zero constant term")
    p = p[: M + 1]
    f = np.zeros(M + 1, dtype=complex)
    for coef in reversed(list(a)):
        f = np.convolve(f, p)[: M + 1]
        if f.size < M + 1:
            f = np.pad(f, (0, M + 1 - f.size))
        f[0] += coef
    return list(f)


def log_taylor(b: Sequence[complex], M: int) -> list[complex]:
    """Coefficients of ``log(f(z) / b_0)`` up to ``z^M``; index 0 holds the zero constant term.

    Uses ``m c_m = m beta_m - sum_{j<m} j c_j beta_{m-j}`` with ``beta = b / b_0``.
    """
    b = list(b)
    if not b or b[0] == 0:
        raise ContractError("b_0 must be nonzero")
    beta = [complex(x) / b[0] for x in b] + [0j] * max(0, M + 1 - len(b))
    c = [0j] * (M + 1)
    for m in range(1, M + 1):
        acc = m * beta[m]
        for j in range(1, m):
            acc -= j * c[j] * beta[m - j]
        c[m] = acc / m
    return c


def exp_taylor(c: Sequence[complex], M: int) -> list[complex]:
    """Inverse of :func:`log_taylor`: coefficients of ``exp(sum c_m z^m)`` (with ``c_0`` ignored)."""
    c = list(c) + [0j] * max(0, M + 1 - len(c))
    out = [1 + 0j] + [0j] * M
    for m in range(1, M + 1):
        acc = 0j
        for j in range(1, m + 1):
            acc += j * c[j] * out[m - j]
        out[m] = acc / m
    return out


# ---------------------------------------------------------------------------
# the approximation


@dataclass
class Diagnostics:
    M: int
    backend: str
    terms: list[float] = field(default_factory=list)
    tail_estimate: float = 0.0
    tail_estimates: list[float] = field(default_factory=list)
    tail_unverified: bool = False
    region_check: bool = False
    region_witness: tuple | None = None
    log_xi: complex = 0j

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "backend": self.backend,
            "terms": self.terms,
            "tail_estimate": self.tail_estimate,
            "tail_unverified": self.tail_unverified,
            "region_check": self.region_check,
            "log_xi": [self.log_xi.real, self.log_xi.imag],
        }


def _tail_at(c: Sequence[complex], M: int) -> float:
    window = [abs(c[m]) for m in range(max(1, M - 2), M + 1)]
    return 2 * max(window) if window else 0.0


def approx_Z(g: Graph, k: int, w: complex, eps_acc: float, plan: InterpolationPlan | None = None,
             region: RegionSpec | None = None) -> tuple[complex, Diagnostics]:
    """Approximate ``Z(G; k, w)`` as ``k^n exp(sum_{m<=M} c_m)``.

    The order grows until the last three terms are each below ``eps_acc / 10``
    (or a fixed ``plan.M`` is used).  Reaching ``|E|`` without meeting that
    target sets ``tail_unverified``.  ``tail_estimate`` is twice the largest of
    the last three terms, taken as a running minimum over the orders tried.
    """
    plan = plan or InterpolationPlan()
    if eps_acc <= 0:
        raise ContractError("eps_acc must be positive")
    D = max(max_degree(g), 3)
    if region is None:
        region = RegionSpec.certified(D, k)
    if max_degree(g) > region.max_degree:
        raise ContractError(f"graph degree {max_degree(g)} exceeds the region's {region.max_degree}")
    row = IMPROVED_ROWS.get(region.max_degree)
    if row and k < row[2]:
        raise ContractError(f"k={k} is below k_Delta={row[2]} for Delta={region.max_degree}")
    w = complex(w)
    if not region_contains(region, w):
        raise ContractError(f"w={w} lies outside the region")

    p = disk_map(plan.rho, plan.N)
    witness = first_escape(p, region, w, plan.disk_margin)
    if plan.check_region and witness is not None:
        disk_map(plan.rho, plan.N, region, w, plan.disk_margin)  # raises with the witness

    a0 = k ** g.n
    if g.m == 0:
        return complex(a0), Diagnostics(0, plan.backend, region_check=witness is None, region_witness=witness,
                                         log_xi=complex(math.log(a0)))

    target = eps_acc / 10
    fixed = plan.M is not None
    top = min(plan.M, g.m) if fixed else g.m

    def small(c, order):
        return all(abs(c[m]) < target for m in range(max(1, order - 2), order + 1))

    # c_m depends on a_0..a_m only, so the prefix can grow by doubling
    L = top if fixed else min(top, 4)
    tails, best, order, M = [], math.inf, 0, None
    while M is None:
        e = edge_subset_sums(g, k, L, plan.backend)
        b = compose_truncate(q_coefficients(g, k, w, L, e=e), p, L)
        c = log_taylor(b, L)
        while order < L:
            order += 1
            best = min(best, _tail_at(c, order))
            tails.append(best)
            if not fixed and small(c, order):
                M = order
                break
        if M is None and L == top:
            M = top
        L = min(2 * L, top)
    log_xi = cmath.log(b[0]) + sum(c[1:M + 1])
    xi = cmath.exp(log_xi)
    diag = Diagnostics(
        M=M,
        backend=plan.backend,
        terms=[abs(x) for x in c[1:M + 1]],
        tail_estimate=tails[M - 1],
        tail_estimates=tails[:M],
        tail_unverified=not small(c, M),
        region_check=witness is None,
        region_witness=witness,
        log_xi=log_xi,
    )
    return xi, diag
