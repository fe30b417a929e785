import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pottszero.conditions import (
    C_BOUNDS,
    IMPROVED_ROWS,
    ConditionParams,
    basic_conditions,
    best_K,
    check,
    closed_interval_conditions,
    f_delta,
    improved_conditions,
    max_eps,
    minimal_k,
    proposition_k_bound,
    ratio_envelope,
    table_row,
)
from pottszero.errors import ContractError, SearchFailure


def test_basic_examples():
    rep = basic_conditions(ConditionParams(3, 10, 0.0, 1 / 3))
    assert rep.holds
    # worst row d = 2: 1 / (9 (2/3)^2) = 0.25
    (bound,) = [t for t in rep.margins if t.d == 2 and t.kind == "bound"]
    assert bound.value == pytest.approx((1 / 3) * 9 * (2 / 3) ** 2 - 1)
    assert math.asin(1 / 3) < math.pi / 6
    rep = basic_conditions(ConditionParams(3, 6, 0.0, 0.4124))
    assert not rep.holds
    assert 1 / (5 * (1 - 0.4124) ** 2) == pytest.approx(0.579, abs=1e-3)
    for K in (0.05, 0.3, 0.6):
        assert not basic_conditions(ConditionParams(3, 3, 0.0, K)).holds


def test_closed_examples():
    for p in [ConditionParams(3, 10, 0.0, 1 / 3), ConditionParams(3, 6, 0.0, 0.4124),
              ConditionParams(4, 12, 0.0, 0.25), ConditionParams(5, 9, 0.0, 0.1)]:
        assert closed_interval_conditions(p).holds == basic_conditions(p).holds
    assert closed_interval_conditions(ConditionParams(3, 10, 0.0, 1 / 3)).holds
    rep = closed_interval_conditions(ConditionParams(3, 10, 0.9, 1 / 3))
    assert not rep.holds
    assert rep.margins_for(0)[1].value < 0


def test_improved_table_rows():
    assert improved_conditions(ConditionParams(3, 6, 0.0, 0.4124)).holds
    assert improved_conditions(ConditionParams(13, 35, 0.0, 0.0800)).holds
    for delta, (K, _, k) in IMPROVED_ROWS.items():
        rep = improved_conditions(ConditionParams(delta, k, 0.0, K))
        assert rep.holds and rep.min_margin > 0


def test_improved_k5_infeasible_on_fine_sweep():
    Ks = np.arange(1, 10000) * 1e-4
    assert not any(improved_conditions(ConditionParams(3, 5, 0.0, float(K))).holds for K in Ks)


def test_invalid_params_report_reason():
    rep = basic_conditions(ConditionParams(2, 10, 0.0, 0.3))
    assert not rep.holds and "Delta" in rep.reason
    rep = improved_conditions(ConditionParams(3, 6, 0.0, 1.2))
    assert not rep.holds and rep.reason


def test_ratio_envelope_examples():
    for d, K in [(1, 0.3), (3, 0.1)]:
        assert ratio_envelope(d, K, 0.0) == pytest.approx(1 - (1 + K) ** (-d))
    assert ratio_envelope(2, 1e-12, 0.4) == pytest.approx(2 * math.sin(0.2))
    v = ratio_envelope(1, 0.4124, math.asin(0.4124))
    assert 0 < v < 1


def test_f_delta_examples():
    assert f_delta(5, 0) == 5
    assert f_delta(3, 2) == pytest.approx(4.75)
    for delta in range(3, 201):
        assert f_delta(delta, delta - 1) + delta - 1 < math.e * delta
    with pytest.raises(ContractError):
        f_delta(2, 1)


def test_e_delta_bound_examples():
    for delta, k in [(3, 10), (4, 12), (50, math.ceil(50 * math.e + 1))]:
        rep = proposition_k_bound(delta)
        assert rep.holds and rep.params.k == k
        assert rep.binding_index == delta - 1
        assert rep.eps_max > 0
        assert basic_conditions(ConditionParams(delta, k, rep.eps_max, 1 / delta)).holds


def test_minimal_k_examples():
    assert minimal_k(3).k_min == 6
    r5 = minimal_k(5)
    assert r5.k_min == 11
    # the optimiser's K is at least as good as the tabulated one
    tabulated = improved_conditions(ConditionParams(5, 11, 0.0, 0.2224))
    ours = improved_conditions(ConditionParams(5, 11, 0.0, r5.K_star))
    assert ours.holds and ours.min_margin >= tabulated.min_margin
    assert minimal_k(12).k_min == 32


def test_minimal_k_cap():
    with pytest.raises(SearchFailure):
        minimal_k(6, cap=8)


def test_minimal_k_basic_system_matches_brute_integer_search():
    for delta in (3, 4):
        mk = minimal_k(delta, "basic")
        grid = np.arange(1, 20000) / 20000

        def feasible(k):
            return any(basic_conditions(ConditionParams(delta, k, 0.0, float(K))).holds for K in grid[::7])

        assert feasible(mk.k_min) and not feasible(mk.k_min - 1)


def test_table_row_structure():
    row = table_row(3)
    assert row["k_min"] == 6 and row["checks"]["k_match"] and row["checks"]["tabulated_row_holds"]
    assert row["checks"]["c_bound_k_match"] and row["checks"]["c_within"]
    assert row["eps_max"] > 0
    assert abs(row["expected"]["K"] - 0.4124) < 5e-5


systems = st.sampled_from(["basic", "closed", "improved"])


@settings(max_examples=150, deadline=None)
@given(systems, st.integers(3, 10), st.floats(3, 60), st.floats(0, 0.5), st.floats(0.01, 0.99))
def test_monotone_in_k(system, delta, k, eps, K):
    a = check(system, ConditionParams(delta, k, eps, K))
    b = check(system, ConditionParams(delta, k + 1, eps, K))
    # inside the admissible theta range the cosine factors are positive, so every margin grows with k
    admissible = math.asin(K) < math.pi / (3 * (delta - 1 + eps))
    for x, y in zip(a.margins, b.margins):
        assert (x.d, x.kind) == (y.d, y.kind)
        if admissible:
            assert y.value >= x.value - 1e-12
    if a.holds:
        assert b.holds


@settings(max_examples=150, deadline=None)
@given(systems, st.integers(3, 10), st.floats(3, 60), st.floats(0, 0.5), st.floats(0, 0.4), st.floats(0.01, 0.99))
def test_monotone_in_eps(system, delta, k, eps, step, K):
    e2 = min(eps + step, 0.99)
    a = check(system, ConditionParams(delta, k, eps, K))
    b = check(system, ConditionParams(delta, k, e2, K))
    for x, y in zip(a.margins, b.margins):
        assert y.value <= x.value + 1e-12
    if b.holds:
        assert a.holds


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 8), st.integers(0, 6))
def test_feasible_k_bounds_minimal_k(delta, extra):
    mk = minimal_k(delta)
    k = mk.k_min + extra
    K, margin = best_K("improved", delta, k)
    assert margin > 0
    assert improved_conditions(ConditionParams(delta, k, 0.0, K)).holds


def test_max_eps_brackets_feasibility():
    e = max_eps("improved", 3, 6, 0.4124)
    assert improved_conditions(ConditionParams(3, 6, e, 0.4124)).holds
    assert not improved_conditions(ConditionParams(3, 6, e + 1e-8, 0.4124)).holds
    assert max_eps("improved", 3, 5, 0.4) == 0.0


def test_embedded_tables_agree_on_k():
    for delta in C_BOUNDS:
        assert C_BOUNDS[delta][1] == IMPROVED_ROWS[delta][2]
