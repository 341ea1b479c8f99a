"""Symmetric ansatz for decompositions of ``q_n^s = (x_1^2 + ... + x_n^2)^s``.

For every arity ``k = 1..s`` the ansatz picks ``p_k(s)`` points ``a`` in
``k`` coordinates. Each point contributes the family

    f_{k,a} = sum over supports t_1 < ... < t_k, distinct arrangements b of a,
              and signs: (b_1 x_{t_1} +- ... +- b_k x_{t_k})^{2s}

with one unknown weight. Matching the coefficient of every monomial class
``M_{2m}`` of ``q_n^s`` gives a block lower-triangular system whose diagonal
blocks do not depend on ``n``; solving it yields the weights, either for a
concrete ``n`` or as polynomials in ``n``.

Right-hand sides are the raw multinomials ``multinomial(s; m)`` (rows are not
rescaled), which gives the same solution as rescaled rows.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import (
    GaussianRational,
    N,
    NPoly,
    binom_poly,
    determinant,
    field_of,
    matrix_rank,
    solve_block_triangular,
)
from .errors import InconsistentSystem, InvalidArgument, RetryExhausted
from .partitions import Partition, enumerate_partitions, multinomial, p_k
from .sympoly import h_value, orbit_forms

log = logging.getLogger(__name__)

DEFAULT_RETRY_BUDGET = 64


def _canon_scalar(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


@dataclass(frozen=True)
class AnsatzSpec:
    """Points of the ansatz, grouped by arity.

    ``blocks[k]`` is the tuple of ``k``-coordinate points. ``n`` is optional;
    the same spec is reused for every ``n``.
    """

    s: int
    blocks: dict
    n: int | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.s < 1:
            raise InvalidArgument("s must be positive")
        for k, pts in self.blocks.items():
            if not 1 <= k <= self.s:
                raise InvalidArgument(f"block arity {k} outside 1..{self.s}")
            for a in pts:
                if len(a) != k:
                    raise InvalidArgument(f"point {a} in block {k} has wrong length")
                if any(c == 0 for c in a):
                    raise InvalidArgument(f"point {a} has a zero coordinate")

    def points(self) -> list:
        """``(k, point)`` in column order: arity descending, block order within."""
        return [(k, tuple(a)) for k in range(self.s, 0, -1) for a in self.blocks.get(k, ())]

    @property
    def field(self) -> str:
        return field_of(c for _, a in self.points() for c in a)


@dataclass
class ConditionSystem:
    matrix: list
    rhs: list
    row_index: list      # (k, Partition)
    col_index: list      # (k, point)
    block_sizes: list    # column block sizes, arity descending
    block_labels: list   # the arity k of each block
    n: int | None = None

    @property
    def row_block_sizes(self) -> list:
        return [sum(1 for k, _ in self.row_index if k == lab) for lab in self.block_labels]

    def is_square_blocked(self) -> bool:
        return self.row_block_sizes == self.block_sizes

    def evaluate(self, n: int) -> "ConditionSystem":
        """Substitute an integer ``n`` into a symbolic system."""
        def ev(x):
            return _canon_scalar(x(n)) if isinstance(x, NPoly) else x
        return ConditionSystem(
            [[ev(x) for x in row] for row in self.matrix],
            [ev(x) for x in self.rhs],
            self.row_index, self.col_index, self.block_sizes, self.block_labels, n,
        )


def coefficient_entry(s: int, m: Partition, point: Sequence, n):
    """Coefficient of ``M_{2m}`` in the family of ``point``.

    ``2^(lam-1) * C(n-k, lam-k) * multinomial(2s; 2m) * h(point, m)`` with
    ``k = len(m)`` and ``lam = len(point)``; zero when ``lam < k``.
    """
    k = len(m)
    lam = len(point)
    if lam < k:
        return 0
    top = n - k if isinstance(n, NPoly) else n - k
    b = binom_poly(top, lam - k)
    base = 2 ** (lam - 1) * multinomial(2 * s, [2 * x for x in m]) * h_value(point, m)
    if isinstance(b, NPoly):
        return b * base
    return _canon_scalar(b * base) if b else 0


def assemble_system(spec: AnsatzSpec, n: int | None = None) -> ConditionSystem:
    """Build the condition system; ``n=None`` keeps ``n`` symbolic.

    Rows are ``(k, m)`` for ``m`` in the k-partitions of ``s``, columns the
    ansatz points, both ordered by ``k`` from ``s`` down to 1. For an integer
    ``n < s`` only arities ``k <= n`` are kept, since the other monomial
    classes and forms do not exist in ``n`` variables.
    """
    if n is None:
        n = spec.n
    s = spec.s
    symbolic = n is None
    nn = N if symbolic else n
    top_k = s if symbolic else min(s, n)
    labels = list(range(top_k, 0, -1))
    rows = [(k, m) for k in labels for m in enumerate_partitions(s, k)]
    cols = [(k, a) for k, a in spec.points() if k <= top_k]
    sizes = [sum(1 for k, _ in cols if k == lab) for lab in labels]
    matrix = [[coefficient_entry(s, m, a, nn) for _, a in cols] for _, m in rows]
    rhs = [Fraction(multinomial(s, m)) for _, m in rows]
    return ConditionSystem(matrix, rhs, rows, cols, sizes, labels, None if symbolic else n)


def consistency_ranks(system: ConditionSystem) -> tuple[int, int]:
    """``(rank of matrix, rank of augmented matrix)`` for a numeric system."""
    if system.n is None:
        raise InvalidArgument("substitute n before checking consistency")
    aug = [list(row) + [b] for row, b in zip(system.matrix, system.rhs)]
    return matrix_rank(system.matrix), matrix_rank(aug)


def solve_system(system: ConditionSystem) -> list:
    """Weights for the columns of ``system`` (polynomial in n when symbolic)."""
    if not system.is_square_blocked():
        if system.n is not None:
            r, ra = consistency_ranks(system)
            if r < ra:
                raise InconsistentSystem(r, ra)
        raise InvalidArgument(
            f"diagonal blocks are not square: rows {system.row_block_sizes}, "
            f"columns {system.block_sizes}"
        )
    sizes = [b for b in system.block_sizes if b]
    labels = [lab for lab, b in zip(system.block_labels, system.block_sizes) if b]
    return solve_block_triangular(system.matrix, system.rhs, sizes, labels)


# --- point selection --------------------------------------------------------


def block_matrix(s: int, k: int, points: Sequence[Sequence]) -> list:
    """The n-independent diagonal block ``[h(a_j, m_i)]`` for arity ``k``."""
    return [[h_value(a, m) for a in points] for m in enumerate_partitions(s, k)]


def block_is_nonsingular(s: int, k: int, points: Sequence[Sequence]) -> bool:
    if len(points) != p_k(s, k):
        return False
    return determinant(block_matrix(s, k, points)) != 0


def _random_points(rng: random.Random, k: int, count: int, bound: int) -> list:
    seen = set()
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000 * count:
            break
        a = tuple(sorted((rng.randint(1, bound) for _ in range(k)), reverse=True))
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


def select_points(s: int, seed: int = 0, strategy: str = "sequence", merge_top: bool = True,
                  max_attempts: int = DEFAULT_RETRY_BUDGET) -> AnsatzSpec:
    """Pick ``p_k(s)`` points per arity so that every diagonal block is nonsingular.

    ``strategy="sequence"`` tries ``(j, 1, ..., 1)`` for ``j = 1..p_k(s)``
    first; ``"random"`` starts from integer points drawn with ``seed``. A
    singular block is redrawn with coordinates in ``[1, B]``, doubling ``B``
    after each failure. With ``merge_top`` the arities ``s`` and ``s - 1``
    use the all-ones point; otherwise they use ``(k, k-1, ..., 1)``.
    """
    if s < 1:
        raise InvalidArgument("s must be positive")
    if strategy not in ("sequence", "random"):
        raise InvalidArgument(f"unknown point strategy {strategy!r}")
    rng = random.Random(seed)
    blocks = {}
    for k in range(s, 0, -1):
        count = p_k(s, k)
        if k >= s - 1:
            pts = [(1,) * k] if merge_top else [tuple(range(k, 0, -1))]
        elif strategy == "sequence":
            pts = [(j,) + (1,) * (k - 1) for j in range(1, count + 1)]
        else:
            pts = _random_points(rng, k, count, max(4, 2 * count))
        bound = max(4, 2 * count)
        attempts = 0
        while not block_is_nonsingular(s, k, pts):
            attempts += 1
            if attempts > max_attempts:
                raise RetryExhausted(
                    f"no nonsingular block for k={k}, s={s} after {max_attempts} draws"
                )
            log.debug("block k=%d singular for %s; redrawing in [1, %d]", k, pts, bound)
            pts = _random_points(rng, k, count, bound)
            bound *= 2
        blocks[k] = tuple(pts)
    return AnsatzSpec(s, blocks, name=f"{strategy}:{seed}")


def naive_spec(s: int) -> AnsatzSpec:
    """Only all-ones points, one per arity (not enough unknowns for s >= 4)."""
    return AnsatzSpec(s, {k: ((1,) * k,) for k in range(1, s + 1)}, name="naive")


# --- decompositions ---------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``q_n^s = sum_j weight_j * (coeffs_j . x)^{2s}``."""

    n: int
    s: int
    field: str
    terms: tuple
    provenance: str = "generated"
    seed: int | None = None

    def __post_init__(self):
        for w, c in self.terms:
            if len(c) != self.n:
                raise InvalidArgument(f"coefficient vector {c} has length != {self.n}")
            if all(x == 0 for x in c):
                raise InvalidArgument("zero coefficient vector in decomposition")

    @property
    def size(self) -> int:
        return sum(1 for w, _ in self.terms if w != 0)

    @property
    def weights(self) -> list:
        return [w for w, _ in self.terms]

    def with_weight(self, index: int, weight) -> "Decomposition":
        terms = list(self.terms)
        terms[index] = (weight, terms[index][1])
        return Decomposition(self.n, self.s, self.field, tuple(terms), self.provenance, self.seed)


def _units(field_name: str, s: int) -> list:
    if field_name == "gaussian" and (2 * s) % 4 == 0:
        i = GaussianRational(0, 1)
        return [1, -1, i, -i]
    return [1, -1]


def _normal_form(coeffs: tuple, units: list) -> tuple:
    """Representative of ``coeffs`` modulo multiplication by the given units."""
    lead = next(c for c in coeffs if c != 0)
    for u in units:
        v = lead * u
        if isinstance(v, GaussianRational):
            if v.re > 0 and v.im >= 0 or (len(units) == 2 and (v.re > 0 or (v.re == 0 and v.im > 0))):
                return tuple(_canon_scalar(c * u) for c in coeffs)
        elif v > 0:
            return tuple(_canon_scalar(c * u) for c in coeffs)
    raise InvalidArgument(f"no normal form for {coeffs}")


def collect_terms(n: int, s: int, weighted_forms: Iterable, field_name: str | None = None) -> tuple:
    """Merge forms equal up to a unit ``mu`` with ``mu^{2s} = 1`` and drop zero weights.

    ``weighted_forms`` yields ``(weight, coeffs)``; order of first appearance
    is kept.
    """
    forms = list(weighted_forms)
    if field_name is None:
        field_name = field_of(c for _, cs in forms for c in cs)
    units = _units(field_name, s)
    acc: dict = {}
    for w, coeffs in forms:
        if w == 0:
            continue
        key = _normal_form(tuple(coeffs), units)
        acc[key] = acc.get(key, 0) + w
    return field_name, tuple((_canon_scalar(w), key) for key, w in acc.items() if w != 0)


def materialize(n: int, s: int, columns: Iterable, provenance: str = "generated",
                seed: int | None = None, orbit: bool = True) -> Decomposition:
    """Expand ``(point, weight)`` columns into explicit weighted linear forms."""
    columns = [(tuple(a), w) for a, w in columns]
    field_name = field_of(c for a, _ in columns for c in a)

    def forms():
        for a, w in columns:
            if w == 0 or len(a) > n:
                continue
            for form in orbit_forms(a, n, orbit=orbit):
                yield w, form.coefficients(n)

    field_name, terms = collect_terms(n, s, forms(), field_name)
    return Decomposition(n, s, field_name, terms, provenance, seed)


def generate(n: int, s: int, seed: int = 0, strategy: str = "sequence",
             merge_top: bool = True) -> Decomposition:
    """Construct an exact decomposition of ``q_n^s`` from the symmetric ansatz."""
    if n < 1 or s < 1:
        raise InvalidArgument("generate needs n >= 1 and s >= 1")
    spec = select_points(s, seed=seed, strategy=strategy, merge_top=merge_top)
    system = assemble_system(spec, n)
    weights = solve_system(system)
    columns = [(a, w) for (_, a), w in zip(system.col_index, weights)]
    return materialize(n, s, columns, provenance="generated", seed=seed)


# --- symbolic solutions -----------------------------------------------------


@dataclass(frozen=True)
class SymbolicTerm:
    k: int
    point: tuple
    weight: NPoly
    orbit: str = "distinct-permutations x signs x supports"


@dataclass(frozen=True)
class SymbolicDecomposition:
    """Weights as polynomials in ``n``; valid for every integer ``n >= valid_for``."""

    s: int
    terms: tuple
    valid_for: int = 1
    name: str = "symbolic"
    points_spec: AnsatzSpec | None = field(default=None, compare=False, repr=False)

    @property
    def scale(self) -> Fraction:
        """Reciprocal of the leading (arity ``s``) weight, the conventional
        left-hand factor ``scale * q_n^s``; falls back to the lcm of all
        coefficient denominators."""
        top = [t.weight for t in self.terms if t.k == self.s]
        if len(top) == 1 and top[0].is_constant() and top[0] != 0:
            v = top[0].constant_value()
            if not isinstance(v, GaussianRational):
                return 1 / Fraction(v)
        dens = [Fraction(c).denominator for t in self.terms for c in t.weight.coefficients
                if not isinstance(c, GaussianRational)]
        return Fraction(math.lcm(*dens)) if dens else Fraction(1)

    def scaled_weights(self, scale=None) -> list:
        scale = self.scale if scale is None else scale
        return [t.weight * scale for t in self.terms]

    def weights_at(self, n: int) -> list:
        return [_canon_scalar(t.weight(n)) for t in self.terms]

    def at(self, n: int) -> Decomposition:
        if n < self.valid_for:
            raise InvalidArgument(f"formula valid for n >= {self.valid_for}")
        cols = [(t.point, w) for t, w in zip(self.terms, self.weights_at(n))]
        return materialize(n, self.s, cols, provenance=self.name)

    def size_polynomial(self) -> NPoly:
        """Number of forms as a polynomial in n, assuming every weight is nonzero.

        Forms on one support are counted after unit merging, by materializing
        the point in exactly ``k`` variables.
        """
        out = NPoly()
        for t in self.terms:
            per_support = materialize(t.k, self.s, [(t.point, 1)]).size
            out = out + binom_poly(N, t.k) * per_support
        return out

    def format(self) -> str:
        scale = self.scale
        lines = [f"{_fmt_scale(scale)}q_n^{self.s} ="]
        for t, w in zip(self.terms, self.scaled_weights(scale)):
            lines.append(f"  + [{w.factored_str()}] * f_{t.k}{_fmt_point(t.point)}")
        return "\n".join(lines)


def _fmt_scale(scale: Fraction) -> str:
    if scale == 1:
        return ""
    if scale.denominator == 1:
        return f"{scale.numerator}*"
    return f"({scale})*"


def _fmt_point(point) -> str:
    return "(" + ", ".join(str(c) for c in point) + ")"


def generate_symbolic(s: int, points: AnsatzSpec | None = None) -> SymbolicDecomposition:
    """Solve the condition system with ``n`` kept symbolic."""
    spec = points if points is not None else select_points(s)
    if spec.s != s:
        raise InvalidArgument(f"spec is for s={spec.s}, not {s}")
    system = assemble_system(spec, None)
    weights = solve_system(system)
    terms = tuple(
        SymbolicTerm(k, a, w if isinstance(w, NPoly) else NPoly.constant(w))
        for (k, a), w in zip(system.col_index, weights)
    )
    return SymbolicDecomposition(s, terms, 1, f"symbolic:{spec.name}", spec)
