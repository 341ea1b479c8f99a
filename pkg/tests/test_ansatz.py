import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import is_decomposition
from quadwaring import ansatz
from quadwaring.ansatz import (
    AnsatzSpec,
    Decomposition,
    assemble_system,
    coefficient_entry,
    collect_terms,
    consistency_ranks,
    generate,
    generate_symbolic,
    materialize,
    naive_spec,
    select_points,
    solve_system,
)
from quadwaring.arith import I, N, NPoly
from quadwaring.bounds import lower_bound, upper_bound_thm11, upper_bound_thm42
from quadwaring.errors import InconsistentSystem, InvalidArgument, RetryExhausted
from quadwaring.partitions import Partition, p_k
from quadwaring.certify import verify_exact
from quadwaring.partitions import enumerate_partitions
from quadwaring.sympoly import SparsePoly


def test_s2_system_entries():
    spec = AnsatzSpec(2, {2: ((1, 1),), 1: ((1,),)})
    sys_ = assemble_system(spec)
    # rows (2,[1,1]) then (1,[2]); columns (1,1) then (1)
    assert sys_.matrix[0][0] == NPoly.constant(12)
    assert sys_.matrix[0][1] == 0
    assert sys_.matrix[1][0] == 2 * (N - 1)
    assert sys_.matrix[1][1] == NPoly.constant(1)
    assert sys_.rhs == [2, 1]
    assert sys_.is_square_blocked()


def test_entry_examples():
    # mixed class (4,4) from point (2,1) at s=4
    assert coefficient_entry(4, Partition((2, 2)), (2, 1), 7) == 2 * (2 ** 4 + 2 ** 4) * math.comb(8, 4)
    assert coefficient_entry(4, Partition((2, 2)), (2, 1), 7) == 4480
    # pure class from point (2,1) at s=5: 2 * 1025 * (n - 1)
    assert coefficient_entry(5, Partition((5,)), (2, 1), N) == 2050 * (N - 1)
    assert coefficient_entry(3, Partition((2, 1)), (1,), 5) == 0


@pytest.mark.parametrize("s,point", [(2, (1, 1)), (3, (2, 1)), (3, (1, 1, 1)), (4, (2, 1, 1)), (3, (3, 1))])
def test_entry_matches_brute_expansion(s, point):
    """Class coefficient of the full orbit sum equals the closed entry."""
    n = len(point) + 1
    total = materialize(n, s, [(point, 1)])
    poly = SparsePoly(n, {})
    for w, cs in total.terms:
        poly = poly + SparsePoly.linear_form(cs) ** (2 * s) * w
    for k in range(1, s + 1):
        for m in enumerate_partitions(s, k):
            if k > n:
                continue
            mono = tuple(2 * x for x in m) + (0,) * (n - k)
            assert poly.coefficient(mono) == coefficient_entry(s, m, point, n)


def test_s3_rows_equivalent_to_reference():
    sys_ = assemble_system(naive_spec(3), 5)
    r, ra = consistency_ranks(sys_)
    assert r == ra == 3
    assert solve_system(sys_) == [F(1, 60), F(2 * (5 - 5), 60), F(2 * (25 - 45 + 38), 60)]


@pytest.mark.parametrize("n", [4, 5, 6, 9])
def test_naive_s4_is_inconsistent(n):
    sys_ = assemble_system(naive_spec(4), n)
    r, ra = consistency_ranks(sys_)
    assert ra > r
    with pytest.raises(InconsistentSystem):
        solve_system(sys_)


def test_default_points():
    assert select_points(1).points() == [(1, (1,))]
    assert select_points(4).points() == [(4, (1, 1, 1, 1)), (3, (1, 1, 1)), (2, (1, 1)), (2, (2, 1)), (1, (1,))]
    assert [a for _, a in select_points(5).points()] == [
        (1, 1, 1, 1, 1), (1, 1, 1, 1), (1, 1, 1), (2, 1, 1), (1, 1), (2, 1), (1,)]


@pytest.mark.parametrize("s", range(1, 9))
@pytest.mark.parametrize("strategy", ["sequence", "random"])
def test_selected_blocks_are_nonsingular(s, strategy):
    spec = select_points(s, seed=3, strategy=strategy, merge_top=False)
    for k in range(1, s + 1):
        assert len(spec.blocks[k]) == p_k(s, k)
        assert ansatz.block_is_nonsingular(s, k, spec.blocks[k])


def test_retry_budget(monkeypatch):
    monkeypatch.setattr(ansatz, "block_is_nonsingular", lambda s, k, pts: False)
    with pytest.raises(RetryExhausted):
        select_points(3, max_attempts=5)


def test_invalid_inputs():
    with pytest.raises(InvalidArgument):
        select_points(3, strategy="bogus")
    with pytest.raises(InvalidArgument):
        AnsatzSpec(2, {3: ((1, 1, 1),)})
    with pytest.raises(InvalidArgument):
        AnsatzSpec(2, {2: ((1, 0),)})
    with pytest.raises(InvalidArgument):
        generate(0, 2)


point_blocks = st.integers(2, 4).flatmap(lambda s: st.tuples(
    st.just(s),
    st.dictionaries(st.integers(1, s),
                    st.lists(st.integers(1, 4), min_size=1, max_size=s),
                    min_size=1),
))


@given(point_blocks, st.integers(1, 9))
def test_block_lower_triangular(data, n):
    s, raw = data
    blocks = {}
    for k, coords in raw.items():
        a = tuple((coords * k)[:k])
        blocks[k] = (a,)
    sys_ = assemble_system(AnsatzSpec(s, blocks), n)
    for (k, _), row in zip(sys_.row_index, sys_.matrix):
        for (lam, _), x in zip(sys_.col_index, row):
            if lam < k:
                assert x == 0


@pytest.mark.parametrize("s", range(1, 6))
def test_symbolic_matches_numeric(s):
    sym = generate_symbolic(s)
    for n in (s, s + 1, s + 5):
        assert sym.at(n).terms == generate(n, s).terms


def test_symbolic_weights_s2_s3():
    assert generate_symbolic(2).weights_at(7) == [F(1, 6), F(4 - 7, 3)]
    sym = generate_symbolic(3)
    assert sym.scale == 60
    assert sym.scaled_weights() == [NPoly.constant(1), 2 * (5 - N), 2 * (N ** 2 - 9 * N + 38)]


@pytest.mark.parametrize("n,s", [(n, s) for s in (1, 2, 3) for n in range(1, 5)])
def test_generate_against_naive_oracle(n, s):
    d = generate(n, s)
    assert is_decomposition(d.terms, n, s)
    assert lower_bound(n, s) <= d.size <= upper_bound_thm11(n, s)


def test_generate_examples():
    assert generate(4, 2).size == 12
    assert generate(5, 2).size == 25
    assert generate(5, 3).size == 45
    assert generate(7, 5).size == 1029


@pytest.mark.parametrize("s", range(2, 6))
@pytest.mark.parametrize("n", range(2, 8))
def test_size_bounds(n, s):
    assert generate(n, s).size <= upper_bound_thm11(n, s)
    assert generate(n, s, merge_top=False).size <= upper_bound_thm42(n, s)


def test_generate_is_deterministic():
    assert generate(5, 3, seed=4, strategy="random") == generate(5, 3, seed=4, strategy="random")


def test_merge_rules():
    # (x + y) and -(x + y) are one form over Q
    field, terms = collect_terms(2, 2, [(F(1), (1, 1)), (F(2), (-1, -1))])
    assert field == "rational" and terms == ((F(3), (F(1), F(1))),)
    # i(x + y) merges with (x + y) only when 4 | 2s
    forms = [(F(1), (1, 1)), (F(1), (I, I))]
    assert len(collect_terms(2, 2, forms, "gaussian")[1]) == 1
    assert len(collect_terms(2, 3, forms, "gaussian")[1]) == 2
    # weights that cancel are pruned
    assert collect_terms(2, 2, [(F(1), (1, 2)), (F(-1), (-1, -2))])[1] == ()


def test_decomposition_invariants():
    d = generate(3, 2)
    assert d.size == len(d.terms)
    assert all(any(c != 0 for c in cs) for _, cs in d.terms)
    e = d.with_weight(0, d.weights[0] + 1)
    assert e.weights[0] == d.weights[0] + 1
    with pytest.raises(InvalidArgument):
        Decomposition(2, 2, "rational", ((F(1), (F(0), F(0))),))


@settings(max_examples=20)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_random_strategy_still_verifies(s, seed):
    n = s + 1
    d = generate(n, s, seed=seed, strategy="random")
    assert verify_exact(d).ok
