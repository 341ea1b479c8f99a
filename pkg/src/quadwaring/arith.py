"""Exact scalars and small dense linear algebra.

Rationals are :class:`fractions.Fraction`. On top of that this module adds
Gaussian rationals, univariate polynomials in a formal symbol ``n`` (used to
carry closed-form weights), and fraction-free (Bareiss) elimination that works
over any of these domains.

Matrices are plain lists of rows.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    ContractViolation,
    DivisionByZero,
    InvalidArgument,
    SingularBlock,
)

Rational = Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (no whitespace, no decimals)."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise InvalidArgument(f"not an exact rational: {text!r}")
    if text.endswith("/0"):
        raise DivisionByZero(f"zero denominator in {text!r}")
    return Fraction(text)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise InvalidArgument("cannot combine a GaussianRational with an imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.norm()
        if d == 0:
            raise DivisionByZero("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return GaussianRational(1) / (self ** (-e))
        result, base = GaussianRational(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        im = format_rational(abs(self.im))
        im = "i" if im == "1" else f"{im}*i"
        if self.re == 0:
            return im if self.im > 0 else f"-{im}"
        sign = "+" if self.im > 0 else "-"
        return f"{format_rational(self.re)}{sign}{im}"


I = GaussianRational(0, 1)


def is_gaussian(x) -> bool:
    return isinstance(x, GaussianRational)


def field_of(values: Iterable) -> str:
    """``"gaussian"`` if any value has a nonzero imaginary part, else ``"rational"``."""
    for v in values:
        if isinstance(v, GaussianRational) and v.im != 0:
            return "gaussian"
    return "rational"


def _canon(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


# --- polynomials in the formal symbol n -------------------------------------


class NPoly:
    """Univariate polynomial in the formal symbol ``n``.

    ``coefficients[d]`` is the coefficient of ``n**d``; trailing zeros are
    stripped, so the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [_canon(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "_c", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("NPoly is immutable")

    @classmethod
    def symbol(cls) -> "NPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, value) -> "NPoly":
        return cls((value,))

    @property
    def coefficients(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise ContractViolation(f"{self} is not constant")
        return self._c[0] if self._c else Fraction(0)

    def __call__(self, n):
        """Evaluate at ``n`` by Horner's rule."""
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * n + c
        return _canon(acc)

    evaluate = __call__

    @staticmethod
    def _lift(other):
        if isinstance(other, NPoly):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return NPoly((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        return NPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return NPoly([-x for x in self._c])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return NPoly()
        out = [Fraction(0)] * (len(self._c) + len(o._c) - 1)
        for i, x in enumerate(self._c):
            if x == 0:
                continue
            for j, y in enumerate(o._c):
                out[i + j] = out[i + j] + x * y
        return NPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # Only division by constants is supported: the closed formulas stay
        # polynomial in n exactly because the pivots never depend on n.
        if isinstance(other, NPoly):
            if not other.is_constant():
                raise ContractViolation(f"division by non-constant polynomial {other}")
            other = other.constant_value()
        if not isinstance(other, (int, Fraction, GaussianRational)):
            return NotImplemented
        if other == 0:
            raise DivisionByZero("division of NPoly by zero")
        return NPoly([x / other for x in self._c])

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = NPoly((1,))
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if len(self._c) <= 1:
            return hash(self._c[0] if self._c else 0)
        return hash(self._c)

    def __bool__(self):
        return bool(self._c)

    def content(self):
        """Split off a rational content: ``self == c * p`` with ``p`` integral,
        primitive and with positive leading coefficient."""
        if not self._c or any(isinstance(x, GaussianRational) for x in self._c):
            return Fraction(1), self
        den = math.lcm(*(x.denominator for x in self._c))
        ints = [int(x * den) for x in self._c]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        c = Fraction(g, den)
        return c, NPoly([Fraction(v, g) for v in ints])

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for d in range(len(self._c) - 1, -1, -1):
            c = self._c[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("n" if d == 1 else f"n^{d}")
            if isinstance(c, GaussianRational):
                coef, neg = f"({c})", False
            else:
                neg = c < 0
                coef = format_rational(abs(c))
            if mono and coef == "1":
                body = mono
            elif mono:
                body = f"{coef}*{mono}"
            else:
                body = coef
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def factored_str(self) -> str:
        """Render as ``content*(primitive)`` the way closed formulas are usually written."""
        c, p = self.content()
        if p.is_constant() or c == 1:
            return str(self)
        if c == -1:
            return f"-({p})"
        return f"{format_rational(c)}*({p})"

    def __repr__(self):
        return f"NPoly({str(self)!r})"


N = NPoly.symbol()


def binom_poly(top, k: int):
    """Binomial ``C(top, k)``; a polynomial when ``top`` is an :class:`NPoly`.

    For integer ``top`` this is the usual binomial with ``C(t, k) = 0``
    for ``t < k``; the polynomial form ``prod(top - i)/k!`` agrees with it at
    every integer ``top >= 0``.
    """
    if k < 0:
        return 0
    if isinstance(top, NPoly):
        acc = NPoly((1,))
        for i in range(k):
            acc = acc * (top - i)
        return acc / math.factorial(k)
    if top < 0:
        return 0
    return math.comb(top, k)


# --- fraction-free elimination ----------------------------------------------


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ContractViolation(f"inexact Bareiss division {a}/{b}")
        return q
    return a / b


def _scalar_entry(x):
    if isinstance(x, NPoly):
        return x.constant_value()
    return x


def _integer_rows(rows):
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        if all(isinstance(x, int) for x in row):
            out.append(list(row))
            continue
        if not all(isinstance(x, (int, Fraction)) for x in row):
            out.append(list(row))
            continue
        den = math.lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence]):
    """Fraction-free row echelon form.

    Returns ``(echelon, rank, pivot_columns)``. Works over the integers,
    rationals, Gaussian rationals, and any domain with exact division by
    previous pivots.
    """
    a = [list(r) for r in rows]
    m = len(a)
    ncols = len(a[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                row_i[j] = _exact_div(row_i[j] * p - f * row_r[j], prev)
            row_i[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return a, r, pivots


def matrix_rank(M: Sequence[Sequence]) -> int:
    """Exact rank; rational rows are cleared to integers first."""
    if not M or not len(M[0]):
        return 0
    _, rank, _ = bareiss_echelon(_integer_rows(M))
    return rank


def determinant(M: Sequence[Sequence]):
    """Exact determinant of a square matrix by Bareiss elimination."""
    m = len(M)
    if any(len(row) != m for row in M):
        raise InvalidArgument("determinant needs a square matrix")
    if m == 0:
        return 1
    a = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(m):
        piv = next((i for i in range(k, m) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[m - 1][m - 1]


def solve_square(A: Sequence[Sequence], b: Sequence, label=None) -> list:
    """Solve ``A x = b`` for square, nonsingular ``A`` by Bareiss elimination.

    ``A`` must have scalar (or constant-polynomial) entries; ``b`` may hold
    :class:`NPoly` values, in which case the solution is polynomial too.
    Raises :class:`SingularBlock` carrying ``label`` if ``A`` is singular.
    """
    m = len(A)
    if len(b) != m or any(len(row) != m for row in A):
        raise InvalidArgument("solve_square needs an m x m matrix and m right-hand sides")
    try:
        a = [[_scalar_entry(x) for x in row] + [b[i]] for i, row in enumerate(A)]
    except ContractViolation as exc:
        raise ContractViolation(f"diagonal block {label} depends on n: {exc}") from None
    prev = 1
    for k in range(m):
        piv = next((i for i in range(k, m) if a[i][k] != 0), None)
        if piv is None:
            raise SingularBlock(label)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        for i in range(k + 1, m):
            f = a[i][k]
            for j in range(k + 1, m + 1):
                a[i][j] = _exact_div(a[i][j] * p - f * a[k][j], prev)
            a[i][k] = 0
        prev = p
    x = [None] * m
    for i in range(m - 1, -1, -1):
        acc = a[i][m]
        for j in range(i + 1, m):
            acc = acc - a[i][j] * x[j]
        x[i] = acc / a[i][i] if not isinstance(acc, int) else Fraction(acc, 1) / a[i][i]
    return [_canon(v) if not isinstance(v, NPoly) else v for v in x]


def solve_block_triangular(
    M: Sequence[Sequence],
    rhs: Sequence,
    block_sizes: Sequence[int],
    labels: Sequence | None = None,
) -> list:
    """Solve a block lower-triangular system by forward substitution over blocks.

    Entries above the block diagonal must be zero. Each diagonal block is
    solved by fraction-free elimination; when the system carries polynomial
    entries, the diagonal blocks must be constant (otherwise a
    :class:`ContractViolation` is raised).
    """
    dim = len(M)
    if any(len(row) != dim for row in M) or len(rhs) != dim:
        raise InvalidArgument("solve_block_triangular needs a square system")
    if sum(block_sizes) != dim or any(b <= 0 for b in block_sizes):
        raise InvalidArgument(f"block sizes {list(block_sizes)} do not partition {dim}")
    if labels is None:
        labels = list(range(len(block_sizes)))
    offsets = []
    o = 0
    for size in block_sizes:
        offsets.append(o)
        o += size
    for o, size in zip(offsets, block_sizes):
        for i in range(o, o + size):
            for j in range(o + size, dim):
                if M[i][j] != 0:
                    raise ContractViolation(
                        f"entry ({i}, {j}) above the block diagonal is nonzero"
                    )
    x: list = []
    for label, o, size in zip(labels, offsets, block_sizes):
        r = []
        for i in range(o, o + size):
            acc = rhs[i]
            for j in range(o):
                if M[i][j] != 0:
                    acc = acc - M[i][j] * x[j]
            r.append(acc)
        block = [M[i][o:o + size] for i in range(o, o + size)]
        x.extend(solve_square(block, r, label=label))
    return x


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a != 0:
                acc = acc + a * b
        out.append(acc)
    return out


def transpose(M: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*M)] if M else []
