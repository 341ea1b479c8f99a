"""Integer partitions, multinomials and the partition-count inequalities."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import mpmath

from .errors import InvalidArgument


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Behaves as a plain tuple (hashable, ordered); ``s`` is the sum and ``k``
    the number of parts.
    """

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise InvalidArgument(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InvalidArgument(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def parts(self) -> tuple:
        return tuple(self)

    @property
    def s(self) -> int:
        return sum(self)

    @property
    def k(self) -> int:
        return len(self)

    def doubled(self) -> "Partition":
        return Partition(2 * p for p in self)

    def padded(self, length: int) -> tuple:
        if length < len(self):
            raise InvalidArgument(f"cannot pad {tuple(self)} to length {length}")
        return tuple(self) + (0,) * (length - len(self))

    def __repr__(self):
        return f"Partition({tuple(self)})"


def _partitions(s: int, k: int, largest: int) -> Iterator[tuple]:
    if k == 0:
        if s == 0:
            yield ()
        return
    # the remaining k-1 parts need at least k-1
    top = min(largest, s - (k - 1))
    low = -(-s // k)  # the first part is at least ceil(s/k)
    for first in range(top, low - 1, -1):
        for rest in _partitions(s - first, k - 1, first):
            yield (first,) + rest


def enumerate_partitions(s: int, k: int) -> list[Partition]:
    """All partitions of ``s`` into exactly ``k`` parts, lexicographically decreasing."""
    if not (1 <= k <= s):
        raise InvalidArgument(f"need 1 <= k <= s, got s={s}, k={k}")
    return [Partition(p) for p in _partitions(s, k, s)]


@lru_cache(maxsize=None)
def _pk(s: int, k: int) -> int:
    if s == 0 and k == 0:
        return 1
    if k <= 0 or s < k:
        return 0
    return _pk(s - k, k) + _pk(s - 1, k - 1)


def p_k(s: int, k: int) -> int:
    """Number of partitions of ``s`` into exactly ``k`` parts.

    Uses ``p_k(s) = p_k(s - k) + p_{k-1}(s - 1)``; zero outside ``1 <= k <= s``.
    """
    if s < 0 or k < 0:
        raise InvalidArgument("p_k needs nonnegative arguments")
    return _pk(s, k)


def p(s: int) -> int:
    """Partition function ``p(s) = sum_k p_k(s)``."""
    if s < 0:
        raise InvalidArgument("p needs s >= 0")
    if s == 0:
        return 1
    return sum(p_k(s, k) for k in range(1, s + 1))


@dataclass(frozen=True)
class PartitionTable:
    s: int
    by_k: tuple  # by_k[k - 1] lists the k-partitions

    @classmethod
    def build(cls, s: int) -> "PartitionTable":
        return cls(s, tuple(tuple(enumerate_partitions(s, k)) for k in range(1, s + 1)))

    def block(self, k: int) -> tuple:
        return self.by_k[k - 1]

    def all(self) -> list[Partition]:
        return [m for block in self.by_k for m in block]


@lru_cache(maxsize=None)
def partition_table(s: int) -> PartitionTable:
    return PartitionTable.build(s)


def multinomial(total: int, parts: Sequence[int]) -> int:
    """``total! / prod(parts!)``; ``parts`` must be nonnegative and sum to ``total``."""
    if any(q < 0 for q in parts):
        raise InvalidArgument(f"negative part in {list(parts)}")
    if sum(parts) != total:
        raise InvalidArgument(f"parts {list(parts)} do not sum to {total}")
    out = 1
    left = total
    for q in parts:
        out *= math.comb(left, q)
        left -= q
    return out


def stabilizer_size(values: Sequence) -> int:
    """Order of the subgroup of S_k fixing ``values``: product of multiplicity factorials."""
    if not len(values):
        raise InvalidArgument("stabilizer_size needs a nonempty tuple")
    out = 1
    for mult in Counter(values).values():
        out *= math.factorial(mult)
    return out


def distinct_permutations(values: Sequence) -> Iterator[tuple]:
    """Each distinct rearrangement of ``values`` exactly once.

    Classic next-permutation walk over the sorted tuple, so repeated entries
    never produce duplicates. Elements only need a total order on their sort
    key; Gaussian values are ordered by ``(re, im)``.
    """
    items = list(values)
    if not items:
        yield ()
        return
    keyed = sorted(items, key=_order_key)
    keys = [_order_key(v) for v in keyed]
    m = len(keyed)
    while True:
        yield tuple(keyed)
        i = m - 2
        while i >= 0 and keys[i] >= keys[i + 1]:
            i -= 1
        if i < 0:
            return
        j = m - 1
        while keys[j] <= keys[i]:
            j -= 1
        keyed[i], keyed[j] = keyed[j], keyed[i]
        keys[i], keys[j] = keys[j], keys[i]
        keyed[i + 1:] = reversed(keyed[i + 1:])
        keys[i + 1:] = reversed(keys[i + 1:])


def _order_key(v):
    re = getattr(v, "re", None)
    if re is not None:
        return (re, v.im)
    return (v, 0)


def count_distinct_permutations(values: Sequence) -> int:
    return math.factorial(len(values)) // stabilizer_size(values)


def weak_compositions(total: int, parts: int) -> Iterator[tuple]:
    """All ``parts``-tuples of nonnegative integers summing to ``total``,
    lexicographically decreasing.

    Stars and bars: bar positions in ascending lexicographic order give the
    compositions in ascending order, so the list is walked backwards.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    out = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        comp = []
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(total + parts - 2 - prev)
        out.append(tuple(comp))
    yield from reversed(out)


@dataclass(frozen=True)
class PartitionBoundsReport:
    s: int
    p_s: int
    merca: dict          # k -> (p_k(s), C(s-1, k-1), holds)
    merca_half: dict     # k -> holds for p_k(s) <= C(s-1,k-1)/2 + 1/2
    kane_lower: object   # rigorous lower end of (6/s) e^{pi sqrt(2s/3)}
    kane_holds: bool

    @property
    def passed(self) -> bool:
        return self.kane_holds and all(v[2] for v in self.merca.values())


def check_partition_bounds(s: int) -> PartitionBoundsReport:
    """Check ``p_k(s) <= C(s-1, k-1)`` for every k and ``p(s) <= (6/s) e^{pi sqrt(2s/3)}``.

    The exponential bound is evaluated in interval arithmetic and compared
    against the lower end of the enclosure, so a pass is never produced by
    rounding.
    """
    if s < 1:
        raise InvalidArgument("check_partition_bounds needs s >= 1")
    merca = {}
    half = {}
    for k in range(1, s + 1):
        pk_ = p_k(s, k)
        b = math.comb(s - 1, k - 1)
        merca[k] = (pk_, b, pk_ <= b)
        half[k] = 2 * pk_ <= b + 1
    ps = p(s)
    iv = mpmath.iv
    old = iv.prec
    iv.prec = 128
    try:
        bound = iv.mpf(6) / s * iv.exp(iv.pi * iv.sqrt(iv.mpf(2 * s) / 3))
        lower = bound.a
        holds = bool(iv.mpf(ps) <= lower)
    finally:
        iv.prec = old
    return PartitionBoundsReport(s, ps, merca, half, lower, holds)
