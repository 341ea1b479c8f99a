"""Named closed-form decompositions and the numeric Stroud family for ``q_n^2``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .ansatz import Decomposition, SymbolicDecomposition, SymbolicTerm, collect_terms, materialize
from .arith import I, N, NPoly
from .errors import DomainError, UnknownBuiltin

F = Fraction


@dataclass(frozen=True)
class ClosedFormula:
    """``scale * q_n^s = sum_j weight_j(n) * f_{k_j, point_j}``."""

    name: str
    s: int
    scale: Fraction
    terms: tuple  # (point, NPoly weight before dividing by scale)
    n_min: int = 1

    def symbolic(self) -> SymbolicDecomposition:
        return SymbolicDecomposition(
            self.s,
            tuple(SymbolicTerm(len(a), a, w / self.scale) for a, w in self.terms),
            self.n_min,
            self.name,
        )

    def at(self, n: int) -> Decomposition:
        if n < self.n_min:
            raise DomainError(f"{self.name} needs n >= {self.n_min}, got {n}")
        cols = [(a, F(w(n)) / self.scale) for a, w in self.terms]
        return materialize(n, self.s, cols, provenance=self.name)


def _p(*coeffs) -> NPoly:
    return NPoly([F(c) for c in coeffs])


CLOSED_FORMULAS = {
    f.name: f
    for f in [
        ClosedFormula("s2-real", 2, F(6), (
            ((1, 1), _p(1)),
            ((1,), 2 * (4 - N)),
        )),
        ClosedFormula("s3", 3, F(60), (
            ((1, 1, 1), _p(1)),
            ((1, 1), 2 * (5 - N)),
            ((1,), 2 * (N ** 2 - 9 * N + 38)),
        )),
        ClosedFormula("s4-real", 4, F(840), (
            ((1, 1, 1, 1), _p(1)),
            ((1, 1, 1), 2 * (6 - N)),
            ((1, 1), F(2, 3) * (3 * N ** 2 - 33 * N + 76)),
            ((2, 1), _p(F(2, 3))),
            ((1,), F(-4, 3) * (N ** 3 - 15 * N ** 2 + 317 * N - 933)),
        )),
        # (1, i) and (i, 1) are the same form up to the unit i, so the
        # merged weight per form is twice the -6 listed here
        ClosedFormula("s4-gaussian", 4, F(840), (
            ((1, 1, 1, 1), _p(1)),
            ((1, 1, 1), 2 * (6 - N)),
            ((1, 1), 2 * (N ** 2 - 11 * N + 42)),
            ((1, I), _p(-6)),
            ((1,), F(-4, 3) * (N ** 3 - 15 * N ** 2 + 92 * N - 708)),
        )),
        ClosedFormula("s5", 5, F(15120), (
            ((1, 1, 1, 1, 1), _p(1)),
            ((1, 1, 1, 1), -2 * (N - 7)),
            ((1, 1, 1), 2 * (N ** 2 - 13 * N + 36)),
            ((2, 1, 1), _p(F(2, 3))),
            ((1, 1), F(-4, 3) * (N ** 3 - 18 * N ** 2 + 90 * N - 226)),
            ((2, 1), F(-4, 3) * (N - 4)),
            ((1,), F(2, 3) * (N ** 4 - 22 * N ** 3 + 2195 * N ** 2 - 15086 * N + 35592)),
        )),
    ]
}

ALIASES = {"s2": "s2-real", "s4": "s4-real"}

BUILTIN_NAMES = tuple(sorted(list(CLOSED_FORMULAS) + list(ALIASES) + ["q8s2"]))


def q8s2() -> Decomposition:
    """The exceptional identity for ``q_8^2`` with rational weights.

    q_8^2 = 3/256 S^4 + 8/9 sum x_j^4 - 8/9 sum_k (-3/16 S + x_k)^4
            + 1/3 sum_{j1<j2} (-3/8 S + x_j1 + x_j2)^4,   S = x_1 + ... + x_8
    """
    n = 8
    forms = [(F(3, 256), [F(1)] * n)]
    forms += [(F(8, 9), [F(int(i == j)) for i in range(n)]) for j in range(n)]
    forms += [(F(-8, 9), [F(-3, 16) + (i == k) for i in range(n)]) for k in range(n)]
    forms += [(F(1, 3), [F(-3, 8) + (i in pair) for i in range(n)])
              for pair in itertools.combinations(range(n), 2)]
    field, terms = collect_terms(n, 2, forms, "rational")
    return Decomposition(n, 2, field, terms, provenance="q8s2")


def resolve_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in CLOSED_FORMULAS and name != "q8s2":
        raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return name


def closed_formula(name: str) -> ClosedFormula:
    name = resolve_name(name)
    if name == "q8s2":
        raise DomainError("q8s2 is a single identity for n = 8, not a formula in n")
    return CLOSED_FORMULAS[name]


def builtin(name: str, n: int) -> Decomposition:
    """Materialize a named decomposition at ``n`` variables."""
    name = resolve_name(name)
    if name == "q8s2":
        if n != 8:
            raise DomainError(f"q8s2 exists only for n = 8, got {n}")
        return q8s2()
    return CLOSED_FORMULAS[name].at(n)


# --- numeric family ---------------------------------------------------------


@dataclass(frozen=True)
class NumericDecomposition:
    """Terms ``(weight, coeffs)`` with mpmath complex entries."""

    n: int
    s: int
    terms: tuple
    label: str = "numeric"

    @property
    def size(self) -> int:
        return len(self.terms)


def stroud_family(n: int, branch: int = 1, prec: int = 256) -> NumericDecomposition:
    """Decomposition of ``q_n^2`` with ``1 + n + C(n, 2)`` terms for ``n >= 3, n != 8``.

    With ``g^4 = 8 - n`` (principal root) and the sign ``branch``:
    ``3 a5^4 q_n^2 = a1 S^4 + sum_k (a2 S + a3 x_k)^4
    + sum_{j1<j2} (a4 S + a5 (x_j1 + x_j2))^4``. Weights are returned already
    divided by ``3 a5^4``.
    """
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    if n < 3 or n == 8:
        raise DomainError(f"the Stroud family needs n >= 3 and n != 8, got {n}")
    with mpmath.workprec(prec):
        g = mpmath.root(mpmath.mpc(8 - n), 4)
        r = 2 * mpmath.sqrt(2)
        a1 = 8 * (g ** 4 - 1) * (g ** 2 + branch * r) ** 4
        a2 = 2 * g ** 2 + branch * r
        a3 = -branch * r * g ** 4 - 8 * g ** 2
        a4 = 2 * g
        a5 = -branch * r * g ** 3 - 8 * g
        lead = 3 * a5 ** 4
        terms = [(a1 / lead, tuple(mpmath.mpc(1) for _ in range(n)))]
        for k in range(n):
            terms.append((1 / lead, tuple(a2 + (a3 if j == k else 0) for j in range(n))))
        for pair in itertools.combinations(range(n), 2):
            terms.append((1 / lead, tuple(a4 + (a5 if j in pair else 0) for j in range(n))))
    return NumericDecomposition(n, 2, tuple(terms), f"stroud{'+' if branch > 0 else '-'}")
