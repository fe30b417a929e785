"""Zero-freeness condition systems and the parameter searches over them.

Three systems are implemented, each a finite list of inequalities indexed by
``d = 0..Delta-1`` (free neighbours) with ``b = Delta - d``:

``basic``
    ``0 < (1+eps)^2 / ((k-b)(1-K)^d - eps*b) <= K``
``closed``
    ``0 < (1+eps)^(2+b) / ((1-K)^d (k-b) - eps*b*(1+eps)^b) <= K``
    (guarantees a neighbourhood of the closed interval [0, 1])
``improved``
    the pair of conditions built from ``cos((d + b*eps) theta / 2)`` and
    the ratio envelope :func:`ratio_envelope`.

All systems also require ``theta = arcsin K`` in ``(0, pi / (3 (Delta - 1 + eps)))``.

Every inequality ``num / den <= K`` is normalised to the margin
``K * den - num``, so that "holds" means every margin is positive and the
margins of different rows are comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ContractError, SearchFailure

__all__ = [
    "ConditionParams",
    "ConditionReport",
    "TermMargin",
    "STRICT_TOL",
    "C_BOUNDS",
    "IMPROVED_ROWS",
    "basic_conditions",
    "closed_interval_conditions",
    "improved_conditions",
    "check",
    "ratio_envelope",
    "f_delta",
    "proposition_k_bound",
    "max_eps",
    "best_K",
    "minimal_k",
    "MinimalK",
    "table_row",
]

System = Literal["basic", "closed", "improved"]
SYSTEMS = ("basic", "closed", "improved")

STRICT_TOL = 1e-12

# Delta -> (c_Delta, k_Delta)
C_BOUNDS = {
    3: (1.485, 6), 4: (1.749, 8), 5: (1.939, 11), 6: (2.081, 14), 7: (2.193, 17),
    8: (2.283, 20), 9: (2.357, 23), 10: (2.419, 26), 11: (2.472, 29), 12: (2.517, 32),
}
# Delta -> (K, theta, k_Delta)
IMPROVED_ROWS = {
    3: (0.4124, 0.4251, 6), 4: (0.2900, 0.2943, 8), 5: (0.2224, 0.2244, 11),
    6: (0.1814, 0.1826, 14), 7: (0.1536, 0.1543, 17), 8: (0.1334, 0.1339, 20),
    9: (0.1179, 0.1183, 23), 10: (0.1057, 0.1060, 26), 11: (0.0959, 0.0961, 29),
    12: (0.0877, 0.0879, 32), 13: (0.0800, 0.0802, 35),
}


@dataclass(frozen=True)
class ConditionParams:
    delta: int
    k: float
    eps: float
    K: float

    @property
    def theta(self) -> float:
        return math.asin(self.K)

    def problems(self) -> list[str]:
        out = []
        if self.delta < 3:
            out.append("Delta must be >= 3")
        if not 0 <= self.eps < 1:
            out.append("eps must lie in [0, 1)")
        if not 0 < self.K < 1:
            out.append("K must lie in (0, 1)")
        if self.k <= 0:
            out.append("k must be positive")
        return out


@dataclass(frozen=True)
class TermMargin:
    d: int | None     # None for the global theta / K range checks
    kind: str
    value: float


@dataclass
class ConditionReport:
    system: str
    params: ConditionParams
    holds: bool
    margins: list[TermMargin] = field(default_factory=list)
    binding_index: int | None = None
    strict: bool = True
    reason: str | None = None
    eps_max: float | None = None

    @property
    def min_margin(self) -> float:
        return min((t.value for t in self.margins), default=-math.inf)

    def margins_for(self, d: int) -> list[TermMargin]:
        return [t for t in self.margins if t.d == d]

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "delta": self.params.delta,
            "k": self.params.k,
            "eps": self.params.eps,
            "K": self.params.K,
            "theta": self.params.theta if 0 < self.params.K < 1 else None,
            "holds": self.holds,
            "strict": self.strict,
            "binding_index": self.binding_index,
            "reason": self.reason,
            "eps_max": self.eps_max,
            "margins": [{"d": t.d, "kind": t.kind, "value": t.value} for t in self.margins],
        }


def ratio_envelope(d: int, K, phi):
    """``max(2 sin(phi/2), sqrt(1 + (1+K)^(-2d) - 2 cos(phi) (1+K)^(-d)))``.

    Works elementwise on numpy arrays.  ``d = 0`` is accepted (the second
    branch then reduces to the chord ``2 sin(phi/2)`` as well).
    """
    r = (1 + K) ** (-d)
    inner = 1 + r * r - 2 * np.cos(phi) * r
    out = np.maximum(2 * np.sin(np.asarray(phi) / 2), np.sqrt(np.maximum(inner, 0.0)))
    return float(out) if np.ndim(out) == 0 else out


def f_delta(delta: int, d: float) -> float:
    """``Delta * (Delta / (Delta - 1))^d - d``."""
    if delta < 3 or d < 0:
        raise ContractError("need Delta >= 3 and d >= 0")
    return delta * (delta / (delta - 1)) ** d - d


def _terms(system: str, delta: int, k, eps: float, K):
    """List of (d, kind, margin) with margins as floats or arrays matching ``K``."""
    theta = np.arcsin(K)
    out = []
    for d in range(delta):
        b = delta - d
        if system == "basic":
            den = (k - b) * (1 - K) ** d - eps * b
            out.append((d, "denominator", den))
            out.append((d, "bound", K * den - (1 + eps) ** 2))
        elif system == "closed":
            den = (1 - K) ** d * (k - b) - eps * b * (1 + eps) ** b
            out.append((d, "denominator", den))
            out.append((d, "bound", K * den - (1 + eps) ** (2 + b)))
        elif system == "improved":
            phi = (d + b * eps) * theta
            grow = (1 + K) ** d
            den = np.cos(phi / 2) * (k - b) - eps * b * grow
            out.append((d, "denominator", den))
            if d <= delta - 2:
                out.append((d, "new1", K * den - (1 + eps) ** 2 * grow))
            out.append((d, "new2", K * den - (1 + eps) * grow * ratio_envelope(d, K, phi)))
        else:
            raise ValueError(f"unknown system {system!r}")
    out.append((None, "theta_upper", math.pi / (3 * (delta - 1 + eps)) - theta))
    if system in ("basic", "closed"):
        # the convexity step needs K < 1/d for every d <= Delta - 1
        out.append((None, "K_upper", 1.0 / (delta - 1) - K))
    return out


def check(system: str, p: ConditionParams, strict: bool = True) -> ConditionReport:
    """Evaluate one condition system at ``p``; see the module docstring."""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}")
    problems = p.problems()
    if problems:
        return ConditionReport(system, p, False, strict=strict, reason="; ".join(problems))
    terms = [TermMargin(d, kind, float(v)) for d, kind, v in _terms(system, p.delta, p.k, p.eps, p.K)]
    tol = STRICT_TOL if strict else 0.0
    failing = [t for t in terms if not (t.value > tol if strict else t.value >= tol)]
    per_d = [t for t in terms if t.d is not None]
    binding = min(per_d, key=lambda t: t.value).d if per_d else None
    reason = None
    if failing:
        worst = min(failing, key=lambda t: t.value)
        where = f"d={worst.d}" if worst.d is not None else "global"
        reason = f"{worst.kind} ({where}) margin {worst.value:.3g}"
    return ConditionReport(system, p, not failing, terms, binding, strict, reason)


def basic_conditions(p: ConditionParams, strict: bool = True) -> ConditionReport:
    return check("basic", p, strict)


def closed_interval_conditions(p: ConditionParams, strict: bool = True) -> ConditionReport:
    return check("closed", p, strict)


def improved_conditions(p: ConditionParams, strict: bool = True) -> ConditionReport:
    return check("improved", p, strict)


def _min_margin(system: str, delta: int, k, eps: float, K):
    terms = _terms(system, delta, k, eps, K)
    return np.min(np.vstack([np.broadcast_to(v, np.shape(K)) for _, _, v in terms]), axis=0)


# ---------------------------------------------------------------------------
# searches


def max_eps(system: str, delta: int, k: float, K: float, tol: float = 1e-9) -> float:
    """Largest ``eps`` (by bisection) at which the system still holds strictly; 0 if it fails at eps = 0."""
    def ok(e):
        return check(system, ConditionParams(delta, k, e, K)).holds

    if not ok(0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


_GRID = 10_000
_INV_PHI = (math.sqrt(5) - 1) / 2


def best_K(system: str, delta: int, k: float, eps: float = 0.0, grid: int = _GRID) -> tuple[float, float]:
    """``(K, margin)`` maximising the minimum margin over ``K in (0, 1)``.

    A uniform sweep brackets the maximum; golden-section search refines it
    inside the neighbouring grid cells.
    """
    Ks = (np.arange(grid) + 0.5) / grid
    m = _min_margin(system, delta, k, eps, Ks)
    i = int(np.argmax(m))
    lo = Ks[i - 1] if i > 0 else Ks[i] / 2
    hi = Ks[i + 1] if i + 1 < grid else (Ks[i] + 1) / 2

    def h(x):
        return float(_min_margin(system, delta, k, eps, np.array([x]))[0])

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(60):
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - _INV_PHI * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + _INV_PHI * (b - a)
            hd = h(d)
    candidates = [(float(m[i]), float(Ks[i])), (hc, c), (hd, d)]
    margin, K = max(candidates)
    return K, margin


@dataclass(frozen=True)
class MinimalK:
    delta: int
    system: str
    k_min: int
    K_star: float
    margin: float
    k_cont: float
    c_val: float

    @property
    def theta(self) -> float:
        return math.asin(self.K_star)


def minimal_k(delta: int, system: str = "improved", cap: int | None = None,
              k_tol: float = 1e-6) -> MinimalK:
    """Least integer ``k`` for which some ``K`` satisfies the system strictly at eps = 0.

    Also returns the continuous threshold ``k_cont`` (least real ``k`` with a
    feasible ``K``, bisection to ``k_tol``) and ``c_val = (k_cont - 1) / Delta``.
    """
    if delta < 3:
        raise ContractError("Delta must be >= 3")
    cap = 20 * delta if cap is None else cap

    def feasible(k):
        K, margin = best_K(system, delta, k)
        return margin > STRICT_TOL, K, margin

    k = delta + 1
    while True:
        ok, K, margin = feasible(k)
        if ok:
            break
        k += 1
        if k > cap:
            raise SearchFailure(f"no feasible k <= {cap} for Delta={delta} ({system})")
    lo, hi = float(delta), float(k)
    while hi - lo > k_tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid)[0]:
            hi = mid
        else:
            lo = mid
    return MinimalK(delta, system, k, K, margin, hi, (hi - 1) / delta)


def proposition_k_bound(delta: int) -> ConditionReport:
    """The ``K = 1/Delta``, ``k = ceil(e*Delta + 1)`` certificate for the basic system.

    The report's ``reason`` is set if the theta range check
    ``arcsin(1/Delta) < pi / (3 (Delta - 1))`` fails; ``eps_max`` carries the
    largest eps (bisection to 1e-9) keeping the conditions.
    """
    if delta < 3:
        raise ContractError("Delta must be >= 3")
    k = math.ceil(math.e * delta + 1)
    p = ConditionParams(delta, k, 0.0, 1.0 / delta)
    rep = basic_conditions(p)
    if not math.asin(1.0 / delta) < math.pi / (3 * (delta - 1)):
        rep.holds = False
        rep.reason = "arcsin(1/Delta) >= pi/(3(Delta-1))"
    rep.eps_max = max_eps("basic", delta, k, 1.0 / delta) if rep.holds else 0.0
    return rep


def table_row(delta: int, system: str = "improved") -> dict:
    """Regenerated table row for ``delta`` next to the embedded expected values.

    ``checks`` holds the regression gates (``None`` where no expected value
    exists); ``theta_consistent`` compares a tabulated theta with
    ``arcsin`` of the tabulated K to 5e-5.
    """
    mk = minimal_k(delta, system)
    rep = check(system, ConditionParams(delta, mk.k_min, 0.0, mk.K_star))
    row = {
        "delta": delta,
        "system": system,
        "k_min": mk.k_min,
        "K_star": mk.K_star,
        "theta": mk.theta,
        "c_val": mk.c_val,
        "k_cont": mk.k_cont,
        "margins": [{"d": t.d, "kind": t.kind, "value": t.value} for t in rep.margins],
        "min_margin": rep.min_margin,
        "eps_max": max_eps(system, delta, mk.k_min, mk.K_star),
        "expected": {},
        "checks": {},
    }
    checks = row["checks"]
    if delta in IMPROVED_ROWS:
        K, theta, k = IMPROVED_ROWS[delta]
        tabulated = check(system, ConditionParams(delta, k, 0.0, K))
        row["expected"].update(k=k, K=K, theta=theta)
        row["tabulated_min_margin"] = tabulated.min_margin
        row["theta_deviation"] = abs(theta - math.asin(K))
        checks["k_match"] = mk.k_min == k
        checks["tabulated_row_holds"] = tabulated.holds
        checks["margin_not_worse"] = rep.min_margin >= tabulated.min_margin
        checks["theta_consistent"] = row["theta_deviation"] <= 5e-5
    if delta in C_BOUNDS:
        c, k = C_BOUNDS[delta]
        row["expected"].update(c=c, k_c_bound=k)
        checks["c_bound_k_match"] = math.ceil(mk.c_val * delta + 1) == k
        checks["c_within"] = mk.c_val <= c + 0.01
    return row
