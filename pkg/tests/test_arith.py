from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadwaring.arith import (
    GaussianRational,
    I,
    N,
    NPoly,
    binom_poly,
    determinant,
    field_of,
    matrix_rank,
    parse_rational,
    solve_block_triangular,
    solve_square,
)
from quadwaring.errors import (
    ContractViolation,
    DivisionByZero,
    InvalidArgument,
    SingularBlock,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
gaussians = st.builds(GaussianRational, fractions, fractions)


def naive_rank(rows):
    """Plain Gauss-Jordan over Fractions, kept separate from the Bareiss code."""
    a = [[F(x) for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def test_parse_rational():
    assert parse_rational("-3/4") == F(-3, 4)
    assert parse_rational("7") == 7
    with pytest.raises(DivisionByZero):
        parse_rational("1/0")
    for bad in ["1.5", " 1", "a", "1/2/3", ""]:
        with pytest.raises(InvalidArgument):
            parse_rational(bad)


def test_gaussian_basics():
    z = GaussianRational(1, 2)
    assert z * z.conjugate() == 5
    assert I * I == -1
    assert (z / z) == 1
    assert str(z) == "1+2*i"
    assert GaussianRational(3, 0) == 3 and hash(GaussianRational(3, 0)) == hash(3)
    with pytest.raises(ZeroDivisionError):
        z / 0
    assert field_of([1, F(1, 2)]) == "rational"
    assert field_of([1, I]) == "gaussian"


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a
    assert (a * b).norm() == a.norm() * b.norm()


def test_npoly_arithmetic_and_format():
    p = 2 * (N ** 2 - 9 * N + 38)
    assert p(5) == 2 * (25 - 45 + 38)
    assert str(F(2, 3) * (3 * N ** 2 - 33 * N + 76)) == "2*n^2 - 22*n + 152/3"
    assert (F(-4, 3) * (N - 4)).factored_str() == "-4/3*(n - 4)"
    assert (N + 1) * (N - 1) == N ** 2 - 1
    with pytest.raises(ContractViolation):
        N / N
    with pytest.raises(DivisionByZero):
        N / 0


@given(st.lists(fractions, max_size=5), st.lists(fractions, max_size=5), st.integers(-20, 20))
def test_npoly_evaluation_is_a_ring_map(a, b, n):
    p, q = NPoly(a), NPoly(b)
    assert (p * q)(n) == p(n) * q(n)
    assert (p - q)(n) == p(n) - q(n)


def test_binom_poly_agrees_with_comb():
    for k in range(5):
        poly = binom_poly(N - 2, k)
        for n in range(2, 12):
            assert poly(n) == binom_poly(n - 2, k)
    assert binom_poly(-1, 2) == 0


@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_naive_elimination(rows):
    assert matrix_rank(rows) == naive_rank(rows)


@given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_cofactor_expansion(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    assert determinant(m) == a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def test_solve_square_polynomial_rhs():
    x = solve_square([[2, 1], [0, 3]], [N, N + 3])
    assert x == [(N - (N + 3) / 3) / 2, (N + 3) / 3]
    with pytest.raises(SingularBlock) as e:
        solve_square([[1, 2], [2, 4]], [1, 1], label=7)
    assert e.value.block == 7
    with pytest.raises(ContractViolation):
        solve_square([[N]], [1])


def test_block_triangular():
    M = [[12, 0], [2 * (N - 1), 1]]
    x = solve_block_triangular(M, [2, 1], [1, 1])
    assert x == [F(1, 6), 1 - 2 * (N - 1) / 6]
    with pytest.raises(ContractViolation):
        solve_block_triangular([[1, 1], [0, 1]], [1, 1], [1, 1])
    with pytest.raises(InvalidArgument):
        solve_block_triangular([[1, 0], [0, 1]], [1, 1], [3])


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_block_triangular_solution_satisfies_system(sizes, rnd):
    dim = sum(sizes)
    M = [[0] * dim for _ in range(dim)]
    o = 0
    for sz in sizes:
        for i in range(o, o + sz):
            for j in range(o + sz):
                M[i][j] = rnd.randint(-5, 5)
            M[i][i] += 20  # diagonally dominant, so blocks are nonsingular
        o += sz
    b = [rnd.randint(-9, 9) for _ in range(dim)]
    x = solve_block_triangular(M, b, sizes)
    assert [sum(F(M[i][j]) * x[j] for j in range(dim)) for i in range(dim)] == b
