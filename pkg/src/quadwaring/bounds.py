"""Rank bounds for ``q_n^s``: catalecticant lower bound, constructive upper
bounds, generic rank and subgenericity thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import mpmath
import numpy as np

from .arith import matrix_rank
from .errors import ContractViolation, InvalidArgument, SizeCapExceeded
from .partitions import multinomial, p_k, weak_compositions

DEFAULT_CATALECTICANT_CAP = 2000
# 2^31 - 1 is prime and products of two residues stay below 2^63
_PRIME = 2_147_483_647


def _check_ns(n: int, s: int):
    if n < 1 or s < 1:
        raise InvalidArgument(f"need n >= 1 and s >= 1, got n={n}, s={s}")


def lower_bound(n: int, s: int) -> int:
    """``C(s+n-1, s)``, the rank of the middle catalecticant of ``q_n^s``."""
    _check_ns(n, s)
    return math.comb(s + n - 1, s)


# --- catalecticant ----------------------------------------------------------


def _q_power_coefficient(gamma) -> int:
    if any(g % 2 for g in gamma):
        return 0
    half = [g // 2 for g in gamma]
    return multinomial(sum(half), half)


def catalecticant_entry(alpha, beta) -> int:
    """Coefficient of ``x^beta`` in ``d^alpha q_n^s``."""
    gamma = [a + b for a, b in zip(alpha, beta)]
    c = _q_power_coefficient(gamma)
    if c == 0:
        return 0
    for g, b in zip(gamma, beta):
        c *= math.factorial(g) // math.factorial(b)
    return c


def catalecticant_matrix(n: int, s: int, cap: int = DEFAULT_CATALECTICANT_CAP) -> list:
    _check_ns(n, s)
    dim = lower_bound(n, s)
    if dim > cap:
        raise SizeCapExceeded(f"catalecticant of size {dim} exceeds cap {cap}")
    idx = list(weak_compositions(s, n))
    return [[catalecticant_entry(a, b) for b in idx] for a in idx]


def _rank_mod_p(M: np.ndarray, prime: int = _PRIME) -> int:
    """Rank of an int64 matrix with entries in ``[0, prime)`` over GF(prime)."""
    M = M.copy()
    nrows, ncols = M.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(M[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, col]), prime - 2, prime)
        pivot_row = M[rank, col:] * inv % prime
        below = M[rank + 1:, col]
        M[rank + 1:, col:] = (M[rank + 1:, col:] - below[:, None] * pivot_row[None, :] % prime) % prime
        rank += 1
    return rank


@lru_cache(maxsize=64)
def _factorial_tables(top: int, prime: int = _PRIME) -> tuple:
    fact = [1] * (top + 1)
    for i in range(1, top + 1):
        fact[i] = fact[i - 1] * i % prime
    inv = [pow(f, prime - 2, prime) for f in fact]
    return np.array(fact, dtype=np.int64), np.array(inv, dtype=np.int64)


def _block_mod_p(idx: list, s: int, prime: int = _PRIME) -> np.ndarray:
    """Catalecticant block on multi-indices of equal parity, reduced mod ``prime``.

    With ``gamma = alpha + beta`` (all even) the entry is
    ``s! / prod (gamma_i/2)! * prod gamma_i! / beta_i!``.
    """
    fact_a, inv_a = _factorial_tables(2 * s, prime)
    A = np.array(idx, dtype=np.int64)
    G = A[:, None, :] + A[None, :, :]
    out = np.full(G.shape[:2], int(fact_a[s]), dtype=np.int64)
    for i in range(A.shape[1]):
        g = G[:, :, i]
        out = out * fact_a[g] % prime
        out = out * inv_a[g // 2] % prime
        out = out * inv_a[A[:, i]][None, :] % prime
    return out


def catalecticant_rank(n: int, s: int, cap: int = DEFAULT_CATALECTICANT_CAP) -> int:
    """Exact rank of the middle catalecticant of ``q_n^s``.

    Entries vanish unless ``alpha`` and ``beta`` have the same parity vector,
    so the matrix splits into blocks. Each block is first ranked modulo a
    large prime; full rank there proves full rank over Q. Blocks that look
    deficient modulo p are re-ranked exactly.
    """
    _check_ns(n, s)
    dim = lower_bound(n, s)
    if dim > cap:
        raise SizeCapExceeded(f"catalecticant of size {dim} exceeds cap {cap}")
    blocks: dict = {}
    for a in weak_compositions(s, n):
        blocks.setdefault(tuple(x % 2 for x in a), []).append(a)
    total = 0
    for idx in blocks.values():
        if len(idx) == 1:
            # the diagonal entry is a positive integer
            total += 1
            continue
        r = _rank_mod_p(_block_mod_p(idx, s))
        if r < len(idx):
            r = matrix_rank([[catalecticant_entry(a, b) for b in idx] for a in idx])
        total += r
    return total


# --- upper bounds -----------------------------------------------------------


def thm11_coefficients(s: int) -> dict:
    """Coefficients ``c_k`` with ``bound(n) = sum_k c_k C(n, k)``."""
    if s < 1:
        raise InvalidArgument("s must be positive")
    if s == 1:
        return {1: 1}
    out = {s: 2 ** (s - 1), s - 1: 2 ** (s - 2)}
    for k in range(1, s - 1):
        out[k] = 2 ** (k - 1) * math.factorial(k) * p_k(s, k)
    return out


def thm42_coefficients(s: int) -> dict:
    if s < 1:
        raise InvalidArgument("s must be positive")
    return {k: 2 ** k * math.factorial(k) * p_k(s, k) for k in range(1, s + 1)}


def _binomial_sum(coeffs: dict, n: int) -> int:
    return sum(c * math.comb(n, k) for k, c in coeffs.items())


def upper_bound_thm11(n: int, s: int) -> int:
    """Size of the construction with a single all-ones point for arities s and s-1."""
    _check_ns(n, s)
    return _binomial_sum(thm11_coefficients(s), n)


def upper_bound_thm42(n: int, s: int) -> int:
    """``sum_k 2^k k! p_k(s) C(n, k)``."""
    _check_ns(n, s)
    return _binomial_sum(thm42_coefficients(s), n)


def generic_rank(n: int, s: int) -> tuple:
    """``(C(2s+n-1, 2s)/n, ceiling)`` for forms of degree 2s in n variables."""
    _check_ns(n, s)
    exact = Fraction(math.comb(2 * s + n - 1, 2 * s), n)
    return exact, math.ceil(exact)


# size formulas usable for thresholds: name -> (s or None, coefficients in the C(n, k) basis)
CLOSED_SIZES = {
    "s2": (2, {2: 2, 1: 1}),
    "stroud": (2, {2: 1, 1: 1, 0: 1}),
    "s3": (3, {3: 4, 2: 2, 1: 1}),
    "s4-real": (4, {4: 8, 3: 4, 2: 6, 1: 1}),
    "s4-gaussian": (4, {4: 8, 3: 4, 2: 4, 1: 1}),
    "s5": (5, {5: 16, 4: 8, 3: 16, 2: 6, 1: 1}),
}


def size_coefficients(s: int, size_formula: str) -> dict:
    if size_formula == "thm11":
        return thm11_coefficients(s)
    if size_formula == "thm42":
        return thm42_coefficients(s)
    if size_formula in CLOSED_SIZES:
        fs, coeffs = CLOSED_SIZES[size_formula]
        if fs != s:
            raise InvalidArgument(f"size formula {size_formula} is for s={fs}, not {s}")
        return coeffs
    raise InvalidArgument(f"unknown size formula {size_formula!r}")


def best_size_formula(s: int) -> str:
    """Smallest available closed size for ``s``: the quadrature family for
    s=2, the ansatz formulas for 3..5, the merged-point bound beyond."""
    return {2: "stroud", 3: "s3", 4: "s4-gaussian", 5: "s5"}.get(s, "thm11")


def step_condition(n: int, s: int) -> bool:
    """``n(s-1) >= 2s^2 - 2s + 1``.

    When it holds, any nonnegative combination of ``C(n, k)``, ``k <= s``,
    grows from n to n+1 by at most ``(n+1)/(n+1-s)``, which is at most the
    growth ``(2s+n)/(n+1)`` of the generic quotient; so a strict inequality
    at n carries over to n+1.
    """
    return n * (s - 1) >= 2 * s * s - 2 * s + 1


def _step_holds_exactly(n: int, s: int) -> bool:
    # the same statement in rational form, as a cross-check of the algebra
    return Fraction(n + 1, n + 1 - s) <= Fraction(2 * s + n, n + 1)


def subgeneric_threshold(s: int, size_formula: str = "thm11", limit: int = 10 ** 6) -> int:
    """Smallest ``N`` with ``size(n) < C(2s+n-1, 2s)/n`` for every ``n > N``.

    Scans upward until the inequality and the propagation condition both
    hold; beyond that point induction covers every larger n.
    """
    if s < 2:
        raise InvalidArgument("subgeneric_threshold needs s >= 2")
    coeffs = size_coefficients(s, size_formula)
    if any(c < 0 for c in coeffs.values()) or max(coeffs) > s:
        raise InvalidArgument("size formula must be a nonnegative combination of C(n, k), k <= s")
    last_fail = 0
    for n in range(1, limit):
        if Fraction(_binomial_sum(coeffs, n)) >= generic_rank(n, s)[0]:
            last_fail = n
        elif n > s and step_condition(n, s):
            return last_fail
    raise InvalidArgument(f"no threshold found below {limit}")


@dataclass(frozen=True)
class Thm14Report:
    s: int
    n: int
    size_formula: str
    size: int
    generic_exact: Fraction
    inequality_holds: bool
    step_holds: bool

    @property
    def passed(self) -> bool:
        return self.inequality_holds and self.step_holds

    @property
    def ratio(self) -> float:
        return float(Fraction(self.size) / self.generic_exact)


def check_thm14(s: int, size_formula: str = "thm42", cap: int = 20) -> Thm14Report:
    """Check ``size(n) < C(2s+n-1, 2s)/n`` and the strict step condition
    ``n(s-1) > 2s^2-2s+1`` at ``n = (2s-1)^2 + 1``, exactly."""
    if not 2 <= s <= cap:
        raise InvalidArgument(f"check_thm14 needs 2 <= s <= {cap}")
    n = (2 * s - 1) ** 2 + 1
    size = _binomial_sum(size_coefficients(s, size_formula), n)
    g = generic_rank(n, s)[0]
    return Thm14Report(s, n, size_formula, size, g, Fraction(size) < g,
                       n * (s - 1) > 2 * s * s - 2 * s + 1)


def asymptotic_factor(s: int, prec: int = 128):
    """Interval enclosure of ``2^s 12 sqrt(pi) e^{pi sqrt(2s/3) - s + 1}``.

    The large-s argument needs this below 1.
    """
    iv = mpmath.iv
    old = iv.prec
    iv.prec = prec
    try:
        return iv.mpf(2) ** s * 12 * iv.sqrt(iv.pi) * iv.exp(iv.pi * iv.sqrt(iv.mpf(2 * s) / 3) - s + 1)
    finally:
        iv.prec = old


def asymptotic_regime_start(limit: int = 1000) -> int:
    """Smallest s from which the factor stays certified below 1 up to ``limit``."""
    start = None
    for s in range(1, limit):
        below = asymptotic_factor(s).b < 1
        if below and start is None:
            start = s
        elif not below:
            start = None
    if start is None:
        raise InvalidArgument("factor never drops below 1")
    return start


# --- tables -----------------------------------------------------------------


@dataclass(frozen=True)
class LogLimitRow:
    n: int
    log_lower: float
    log_upper: float


def log_limit_table(s: int, n_list: Iterable[int]) -> list:
    """Rows ``(n, log_n lower_bound, log_n upper_thm11)``; needs n >= 2."""
    rows = []
    for n in n_list:
        if n < 2:
            raise InvalidArgument("log_n needs n >= 2")
        ln = math.log(n)
        rows.append(LogLimitRow(n, math.log(lower_bound(n, s)) / ln,
                                math.log(upper_bound_thm11(n, s)) / ln))
    return rows


@dataclass(frozen=True)
class BoundsReport:
    n: int
    s: int
    lower_catalecticant: int
    upper_thm11: int
    upper_thm42: int
    generic_rank_exact: Fraction
    generic_rank_ceil: int
    achieved_size: int | None
    subgeneric: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "lower": self.lower_catalecticant,
            "upper11": self.upper_thm11,
            "upper42": self.upper_thm42,
            "generic_exact_num": self.generic_rank_exact.numerator,
            "generic_exact_den": self.generic_rank_exact.denominator,
            "generic_ceil": self.generic_rank_ceil,
            "achieved": self.achieved_size,
            "subgeneric": self.subgeneric,
        }


CSV_HEADER = ("n", "s", "lower", "upper11", "upper42", "generic_exact_num",
              "generic_exact_den", "subgeneric")


def bounds_report(n: int, s: int, achieved_size: int | None = None) -> BoundsReport:
    lo = lower_bound(n, s)
    u11 = upper_bound_thm11(n, s)
    u42 = upper_bound_thm42(n, s)
    if n >= s and not lo <= u11 <= u42:
        raise ContractViolation(f"bound ordering broken at n={n}, s={s}")
    g, gc = generic_rank(n, s)
    best = u11 if achieved_size is None else min(achieved_size, u11)
    return BoundsReport(n, s, lo, u11, u42, g, gc, achieved_size, Fraction(best) < g)


def size_function(s: int, size_formula: str) -> Callable[[int], int]:
    coeffs = size_coefficients(s, size_formula)
    return lambda n: _binomial_sum(coeffs, n)

