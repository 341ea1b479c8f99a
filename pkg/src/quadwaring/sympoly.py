"""Sparse multivariate polynomials and the symmetric building blocks.

A :class:`SparsePoly` maps exponent tuples (one entry per variable) to nonzero
coefficients. Coefficients may be ints, Fractions or Gaussian rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidArgument
from .partitions import (
    distinct_permutations,
    enumerate_partitions,
    multinomial,
    weak_compositions,
)


def grevlex_key(alpha: Sequence[int]):
    """Sort key placing monomials in descending graded reverse lexicographic order."""
    return (-sum(alpha), tuple(reversed(alpha)))


class SparsePoly:
    __slots__ = ("n", "degree", "_terms")

    def __init__(self, n: int, terms: Mapping | Iterable = (), degree: int | None = None):
        if n < 0:
            raise InvalidArgument("variable count must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for alpha, c in items:
            alpha = tuple(alpha)
            if len(alpha) != n:
                raise InvalidArgument(f"exponent {alpha} has wrong length for n={n}")
            if degree is not None and sum(alpha) != degree:
                raise InvalidArgument(f"exponent {alpha} is not of degree {degree}")
            if c != 0:
                clean[alpha] = clean[alpha] + c if alpha in clean else c
                if clean[alpha] == 0:
                    del clean[alpha]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    @classmethod
    def _raw(cls, n, terms, degree=None):
        # terms already clean (no zeros, right lengths)
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "_terms", terms)
        return obj

    @classmethod
    def zero(cls, n: int, degree: int | None = None) -> "SparsePoly":
        return cls._raw(n, {}, degree)

    @classmethod
    def variable(cls, i: int, n: int) -> "SparsePoly":
        alpha = [0] * n
        alpha[i] = 1
        return cls._raw(n, {tuple(alpha): 1}, 1)

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "SparsePoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                alpha = [0] * n
                alpha[i] = 1
                terms[tuple(alpha)] = c
        return cls._raw(n, terms, 1)

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def coefficient(self, alpha: Sequence[int]):
        return self._terms.get(tuple(alpha), 0)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: grevlex_key(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(self.sorted_terms())

    def _check(self, other: "SparsePoly"):
        if other.n != self.n:
            raise InvalidArgument(f"variable count mismatch: {self.n} vs {other.n}")

    def _merge_degree(self, other):
        if self.degree == other.degree:
            return self.degree
        return None

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for alpha, c in other._terms.items():
            v = out.get(alpha, 0) + c
            if v == 0:
                out.pop(alpha, None)
            else:
                out[alpha] = v
        return SparsePoly._raw(self.n, out, self._merge_degree(other))

    def __neg__(self):
        return SparsePoly._raw(self.n, {a: -c for a, c in self._terms.items()}, self.degree)

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SparsePoly":
        if c == 0:
            return SparsePoly.zero(self.n, self.degree)
        return SparsePoly._raw(self.n, {a: v * c for a, v in self._terms.items()}, self.degree)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out: dict = {}
        for a, x in self._terms.items():
            for b, y in other._terms.items():
                g = tuple(i + j for i, j in zip(a, b))
                v = out.get(g, 0) + x * y
                if v == 0:
                    out.pop(g, None)
                else:
                    out[g] = v
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return SparsePoly._raw(self.n, out, deg)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = SparsePoly._raw(self.n, {(0,) * self.n: 1}, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    __hash__ = None

    def permute_variables(self, perm: Sequence[int]) -> "SparsePoly":
        """Substitute ``x_i -> x_{perm[i]}``."""
        out = {}
        for alpha, c in self._terms.items():
            beta = [0] * self.n
            for i, e in enumerate(alpha):
                beta[perm[i]] = e
            out[tuple(beta)] = c
        return SparsePoly._raw(self.n, out, self.degree)

    def has_only_even_exponents(self) -> bool:
        return all(e % 2 == 0 for alpha in self._terms for e in alpha)

    def __repr__(self):
        body = " + ".join(f"{c}*x^{list(a)}" for a, c in self.sorted_terms()[:6])
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"SparsePoly(n={self.n}, {body or '0'}{more})"


# --- symmetric building blocks ----------------------------------------------


def monomial_symmetric(m: Sequence[int], n: int) -> SparsePoly:
    """The monomial symmetric polynomial of ``m`` in ``n`` variables.

    Each monomial of the S_n-orbit of ``x^m`` appears once with coefficient 1.
    Returns the zero polynomial when ``m`` has more parts than variables.
    """
    m = tuple(m)
    if len(m) > n:
        return SparsePoly.zero(n, sum(m))
    padded = m + (0,) * (n - len(m))
    return SparsePoly._raw(n, {alpha: 1 for alpha in distinct_permutations(padded)}, sum(m))


def expand_q_power(n: int, s: int) -> SparsePoly:
    """Expand ``(x_1^2 + ... + x_n^2)^s`` term by term with multinomials."""
    if n < 1 or s < 0:
        raise InvalidArgument("expand_q_power needs n >= 1, s >= 0")
    terms = {}
    for i in weak_compositions(s, n):
        terms[tuple(2 * e for e in i)] = multinomial(s, i)
    return SparsePoly._raw(n, terms, 2 * s)


@lru_cache(maxsize=None)
def power_expansion_table(degree: int, r: int) -> tuple:
    """``(exponents, multinomial)`` for every weak composition of ``degree`` into ``r`` parts."""
    return tuple((e, multinomial(degree, e)) for e in weak_compositions(degree, r))


def expand_linear_power(coeffs: Sequence, degree: int, support: Sequence[int] | None = None,
                        n: int | None = None) -> SparsePoly:
    """Expand ``(sum_j coeffs[j] * x_{support[j]})^degree`` by the multinomial theorem."""
    if support is None:
        support = range(len(coeffs))
    support = tuple(support)
    if n is None:
        n = max(support) + 1 if support else 0
    out: dict = {}
    _accumulate_power(out, coeffs, support, n, degree, 1)
    return SparsePoly._raw(n, {a: c for a, c in out.items() if c != 0}, degree)


def _accumulate_power(out: dict, coeffs, support, n, degree, weight):
    r = len(support)
    powers = []
    for c in coeffs:
        row = [1]
        for _ in range(degree):
            row.append(row[-1] * c)
        powers.append(row)
    base = [0] * n
    for exps, mult in power_expansion_table(degree, r):
        v = mult * weight
        for j, e in enumerate(exps):
            if e:
                v = v * powers[j][e]
        if v == 0:
            continue
        for j, e in zip(support, exps):
            base[j] = e
        key = tuple(base)
        out[key] = out.get(key, 0) + v
    for j in support:
        base[j] = 0


@dataclass(frozen=True)
class SignedOrbitForm:
    """One signed arrangement of a point on a support of variables.

    The linear form is ``sum_i sign_i * perm_i * x_{support_i}`` with the
    first sign fixed to ``+``.
    """

    k: int
    point: tuple
    support: tuple
    sign_pattern: tuple
    perm: tuple

    def __post_init__(self):
        if len(self.point) != self.k or len(self.support) != self.k or len(self.perm) != self.k:
            raise InvalidArgument("SignedOrbitForm fields must all have length k")
        if self.sign_pattern[:1] not in ((), (1,)):
            raise InvalidArgument("first sign must be +")
        if any(self.support[i] >= self.support[i + 1] for i in range(self.k - 1)):
            raise InvalidArgument("support must be strictly increasing")
        if any(a == 0 for a in self.point):
            raise InvalidArgument("point entries must be nonzero")

    def signed_coefficients(self) -> tuple:
        return tuple(sg * a for sg, a in zip(self.sign_pattern, self.perm))

    def coefficients(self, n: int) -> tuple:
        out = [0] * n
        for j, c in zip(self.support, self.signed_coefficients()):
            out[j] = c
        return tuple(out)


def sign_patterns(k: int) -> Iterator[tuple]:
    """The ``2^(k-1)`` sign vectors with the first entry ``+1``."""
    if k == 0:
        yield ()
        return
    for rest in itertools.product((1, -1), repeat=k - 1):
        yield (1,) + rest


def orbit_forms(point: Sequence, n: int, orbit: bool = True) -> Iterator[SignedOrbitForm]:
    """All forms of the family of ``point``: supports x distinct arrangements x signs."""
    point = tuple(point)
    k = len(point)
    arrangements = list(distinct_permutations(point)) if orbit else [point]
    signs = list(sign_patterns(k))
    for support in itertools.combinations(range(n), k):
        for perm in arrangements:
            for sg in signs:
                yield SignedOrbitForm(k, point, support, sg, perm)


def expand_signed_power(point: Sequence, s: int, n: int | None = None,
                        support: Sequence[int] | None = None, orbit: bool = True) -> SparsePoly:
    """Expand the sign-symmetrized family of ``point`` raised to the power ``2s``.

    Sums ``(b_1 x_{t_1} +- ... +- b_k x_{t_k})^{2s}`` over the ``2^(k-1)``
    sign choices and, when ``orbit`` is set, over the distinct arrangements
    ``b`` of ``point``. With ``support=None`` the family lives on the first
    ``k`` variables of ``n`` (default ``n = k``). The result only contains
    even exponents.
    """
    point = tuple(point)
    k = len(point)
    if n is None:
        n = k
    if support is None:
        support = tuple(range(k))
    support = tuple(support)
    arrangements = list(distinct_permutations(point)) if orbit else [point]
    out: dict = {}
    for perm in arrangements:
        for sg in sign_patterns(k):
            coeffs = [a * b for a, b in zip(sg, perm)]
            _accumulate_power(out, coeffs, support, n, 2 * s, 1)
    return SparsePoly._raw(n, {a: c for a, c in out.items() if c != 0}, 2 * s)


def h_value(point: Sequence, m: Sequence[int]):
    """Orbit sum of ``prod_i a_i^{2 m_i}`` over the distinct arrangements of ``point``.

    ``m`` is padded with zeros to ``len(point)``. Equals the full S_k sum
    divided by the stabilizer size of ``point``.
    """
    point = tuple(point)
    m = tuple(m)
    if len(m) > len(point):
        raise InvalidArgument(f"partition {m} has more parts than point {point}")
    acc = 0
    for perm in distinct_permutations(point):
        term = 1
        for a, e in zip(perm, m):
            if e:
                term = term * a ** (2 * e)
        acc = acc + term
    return acc


def q_power_by_classes(n: int, s: int) -> SparsePoly:
    """Rebuild ``q_n^s`` as ``sum_m multinomial(s; m) * M_{2m}`` over partitions of ``s``."""
    out = SparsePoly.zero(n, 2 * s)
    for k in range(1, min(n, s) + 1):
        for m in enumerate_partitions(s, k):
            out = out + monomial_symmetric(m.doubled(), n).scale(multinomial(s, m))
    return out


__all__ = [
    "SparsePoly",
    "SignedOrbitForm",
    "grevlex_key",
    "monomial_symmetric",
    "expand_q_power",
    "expand_linear_power",
    "expand_signed_power",
    "h_value",
    "orbit_forms",
    "sign_patterns",
    "power_expansion_table",
    "q_power_by_classes",
]
