import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracle import q_power
from quadwaring import bounds
from quadwaring.arith import matrix_rank
from quadwaring.bounds import (
    asymptotic_factor,
    asymptotic_regime_start,
    bounds_report,
    catalecticant_entry,
    catalecticant_matrix,
    catalecticant_rank,
    check_thm14,
    generic_rank,
    log_limit_table,
    lower_bound,
    size_function,
    step_condition,
    subgeneric_threshold,
    thm11_coefficients,
    upper_bound_thm11,
    upper_bound_thm42,
)
from quadwaring.errors import InvalidArgument, SizeCapExceeded
from quadwaring.partitions import p_k, weak_compositions


def brute_catalecticant(n, s):
    """Derivative of the naive expansion, read off coefficient by coefficient."""
    q = q_power(n, s)
    idx = list(weak_compositions(s, n))

    def entry(alpha, beta):
        gamma = tuple(a + b for a, b in zip(alpha, beta))
        c = q.get(gamma, 0)
        for g, b in zip(gamma, beta):
            c *= math.perm(g, g - b)
        return c

    return [[entry(a, b) for b in idx] for a in idx]


def test_lower_bound_examples():
    assert [lower_bound(3, s) for s in range(1, 6)] == [math.comb(s + 2, 2) for s in range(1, 6)]
    assert lower_bound(1, 7) == 1
    assert lower_bound(4, 2) == 10


@pytest.mark.parametrize("n,s", [(2, 2), (3, 1), (3, 3), (2, 4), (4, 2), (3, 4)])
def test_catalecticant_against_brute_force(n, s):
    M = brute_catalecticant(n, s)
    assert catalecticant_matrix(n, s) == M
    assert catalecticant_rank(n, s) == matrix_rank(M) == lower_bound(n, s)


def test_catalecticant_examples():
    assert catalecticant_rank(2, 2) == 3
    assert catalecticant_rank(3, 1) == 3
    assert catalecticant_rank(3, 3) == 10
    assert catalecticant_entry((1, 0, 0), (1, 0, 0)) == 2


def test_catalecticant_exact_fallback(monkeypatch):
    # pretend every residue computation is rank deficient
    monkeypatch.setattr(bounds, "_rank_mod_p", lambda M, prime=0: 0)
    assert catalecticant_rank(3, 4) == lower_bound(3, 4)


def test_rank_mod_small_prime_can_undercount():
    import numpy as np
    M = np.array([[2, 1], [1, 3]], dtype=np.int64)  # det 5
    assert bounds._rank_mod_p(M, 5) == 1
    assert bounds._rank_mod_p(M, 7) == 2


def test_catalecticant_cap():
    with pytest.raises(SizeCapExceeded):
        catalecticant_rank(10, 10, cap=500)


def test_upper_bound_examples():
    n = F(7)
    assert upper_bound_thm11(7, 3) == (F(2, 3) * n ** 3 - n ** 2 + F(4, 3) * n)
    assert [upper_bound_thm11(n, 1) for n in (1, 5, 9)] == [1, 5, 9]
    assert all(upper_bound_thm11(n, 2) == n * n for n in range(1, 50))
    oracle = sum(2 ** k * math.factorial(k) * p_k(5, k) * math.comb(10, k) for k in range(1, 6))
    assert upper_bound_thm42(10, 5) == oracle
    assert thm11_coefficients(4) == {4: 8, 3: 4, 2: 2 * 2 * 2, 1: 1}


def test_bound_ordering_grid():
    for s in range(1, 11):
        for n in range(s, 101):
            assert lower_bound(n, s) <= upper_bound_thm11(n, s) <= upper_bound_thm42(n, s)


def test_generic_rank():
    assert generic_rank(1, 4) == (F(1), 1)
    assert generic_rank(12, 3) == (F(12376, 12), 1032)
    assert bounds_report(12, 3).subgeneric
    assert not bounds_report(11, 3).subgeneric
    assert bounds_report(18, 2).subgeneric


def brute_threshold(size, s, horizon=3000):
    return max(n for n in range(1, horizon) if F(size(n)) >= generic_rank(n, s)[0])


@pytest.mark.parametrize("s,formula,want", [
    (3, "s3", 11), (4, "s4-real", 10), (5, "s5", 8),
    (4, "s4-gaussian", 9), (2, "s2", 17), (2, "stroud", 6),
])
def test_thresholds(s, formula, want):
    assert subgeneric_threshold(s, formula) == want
    assert brute_threshold(size_function(s, formula), s) == want


def test_merged_point_thresholds():
    got = [subgeneric_threshold(s) for s in range(2, 8)]
    assert got == [17, 11, 10, 11, 15, 22]
    assert got == [brute_threshold(size_function(s, "thm11"), s) for s in range(2, 8)]
    # within (2s-1)^2 for s >= 3; at s=2 the size is exactly n^2 and 17 > 9
    assert all(t <= (2 * s - 1) ** 2 for s, t in zip(range(3, 8), got[1:]))
    assert got[0] > 9


@given(st.integers(2, 40), st.integers(1, 4000))
def test_step_condition_matches_growth_ratio(s, n):
    if n > s:
        assert step_condition(n, s) == bounds._step_holds_exactly(n, s)


def test_desk_check_values():
    # the general bound is too large for s <= 5 at n = (2s-1)^2 + 1
    r = check_thm14(2)
    assert (r.n, r.size, r.generic_exact) == (10, 380, F(715, 10))
    assert not r.passed and r.step_holds
    assert check_thm14(3).size == 52 + 8 * 325 + 48 * 2600 and not check_thm14(3).passed
    for s in range(6, 21):
        assert check_thm14(s).passed, s
    assert check_thm14(6).n == 122
    # the smaller constructions close the gap for s = 2..5
    for s, f in [(2, "stroud"), (3, "s3"), (4, "s4-gaussian"), (5, "s5")]:
        assert check_thm14(s, f).passed
    with pytest.raises(InvalidArgument):
        check_thm14(21)


def test_asymptotic_regime():
    assert asymptotic_regime_start() == 95
    assert asymptotic_factor(94).b >= 1
    assert asymptotic_factor(95).b < 1


def test_log_limit_table():
    for row in log_limit_table(1, [2, 10, 1000]):
        assert row.log_lower == 1.0 and row.log_upper == 1.0
    (row,) = log_limit_table(2, [10 ** 4])
    assert 1.5 < row.log_lower < 2 and row.log_upper == pytest.approx(2)
    rows = log_limit_table(3, [100, 1000, 10000])
    gaps = [3 - r.log_lower for r in rows]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < 0.35
    with pytest.raises(InvalidArgument):
        log_limit_table(2, [1])


def test_bounds_report_dict():
    d = bounds_report(5, 3, achieved_size=45).as_dict()
    assert d["lower"] == 35 and d["upper11"] == 40 + 20 + 5 and d["achieved"] == 45
    assert F(d["generic_exact_num"], d["generic_exact_den"]) == generic_rank(5, 3)[0]
