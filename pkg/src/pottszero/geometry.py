"""Plane-geometry facts about complex numbers viewed as vectors in R^2.

The ``*_holds`` / ``*_bound`` predicates evaluate one side of a known
inequality against the other.  Under their preconditions they are theorems,
so a ``False`` return is a bug or a rounding artefact, never a legitimate
outcome; the property suites rely on that.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable

from .errors import ContractError

__all__ = [
    "angle_between",
    "cone_sum_bound_holds",
    "in_disk_power",
    "pair_distance_bound",
    "pair_distance_envelope",
    "simple_geom_bounds",
]

# slack on angle preconditions, so inputs built to sit exactly on a boundary are accepted
_ANGLE_TOL = 1e-12


def angle_between(u: complex, v: complex) -> float:
    """Angle in ``[0, pi]`` between two nonzero vectors."""
    if u == 0 or v == 0:
        raise ContractError("angle of a zero vector is undefined")
    # phase of u * conj(v) is the argument difference reduced to (-pi, pi]
    return abs(cmath.phase(complex(u) * complex(v).conjugate()))


def cone_sum_bound_holds(us: Iterable[complex], alpha: float) -> bool:
    """Check ``|sum u_i| >= cos(alpha/2) * sum |u_i|`` for vectors with pairwise angles <= alpha."""
    us = [complex(u) for u in us]
    if not 0 <= alpha < 2 * math.pi / 3:
        raise ContractError("alpha must lie in [0, 2pi/3)")
    if any(u == 0 for u in us):
        raise ContractError("vectors must be nonzero")
    for i in range(len(us)):
        for j in range(i + 1, len(us)):
            if angle_between(us[i], us[j]) > alpha + _ANGLE_TOL:
                raise ContractError(f"vectors {i} and {j} are more than alpha apart")
    total = sum(abs(u) for u in us)
    lhs = abs(sum(us))
    return lhs >= math.cos(alpha / 2) * total * (1 - 1e-12)


def in_disk_power(z: complex, r: float, d: int) -> bool:
    """Membership of ``z`` in ``B(1, r)^d``, the set of products of ``d`` points of the open disk B(1, r).

    For a symmetric multi-affine product the Grace-Szego-Walsh theorem
    reduces membership to: some d-th root of ``z`` lies in ``B(1, r)``.
    """
    if r <= 0 or d < 1:
        raise ContractError("need r > 0 and d >= 1")
    z = complex(z)
    if z == 0:
        # 0 is a product of points of the disk iff 0 itself lies in it
        return r > 1
    mod = abs(z) ** (1.0 / d)
    base = cmath.phase(z) / d
    for j in range(d):
        zeta = cmath.rect(mod, base + 2 * math.pi * j / d)
        if abs(zeta - 1) < r:
            return True
    return False


def pair_distance_envelope(r: float, phi: float) -> float:
    """``max(2 sin(phi/2), sqrt(1 + r^-2 - 2 r^-1 cos(phi)))``."""
    chord = 2 * math.sin(phi / 2)
    inner = 1 + r ** -2 - 2 * math.cos(phi) / r
    return max(chord, math.sqrt(max(inner, 0.0)))


def pair_distance_bound(u: complex, v: complex, r: float, phi: float) -> bool:
    """Check ``|u - v| <= envelope(r, phi) * max(|u|, |v|)`` under angle <= phi < pi/3 and ratio in [1/r, r]."""
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        raise ContractError("vectors must be nonzero")
    if r < 1:
        raise ContractError("r must be >= 1")
    if not 0 <= phi < math.pi / 3:
        raise ContractError("phi must lie in [0, pi/3)")
    if angle_between(u, v) > phi + _ANGLE_TOL:
        raise ContractError("angle between u and v exceeds phi")
    ratio = abs(u) / abs(v)
    if not (1 / r) * (1 - 1e-12) <= ratio <= r * (1 + 1e-12):
        raise ContractError("modulus ratio outside [1/r, r]")
    bound = pair_distance_envelope(r, phi) * max(abs(u), abs(v))
    return abs(u - v) <= bound * (1 + 1e-12) + 1e-300


def simple_geom_bounds(u: complex, v: complex) -> tuple[bool, bool]:
    """The two triangle facts for nonzero ``u, v``.

    First flag: angle <= pi/3 implies ``|u - v| <= max(|u|, |v|)`` (vacuously
    true otherwise).  Second flag: ``sin(angle) <= |u - v| / |v|``.
    """
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        raise ContractError("vectors must be nonzero")
    gamma = angle_between(u, v)
    dist = abs(u - v)
    first = True
    if gamma <= math.pi / 3:
        first = dist <= max(abs(u), abs(v)) * (1 + 1e-12)
    second = math.sin(gamma) <= dist / abs(v) * (1 + 1e-12) + 1e-15
    return first, second
