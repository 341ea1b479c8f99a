"""The reproduction checks behind ``quadwaring check-paper``.

Each ``criterion_*`` function returns a :class:`CriterionResult`; nothing
here is relaxed to make a check pass. A failing check lists what failed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .ansatz import assemble_system, consistency_ranks, generate, generate_symbolic, naive_spec
from .arith import N, NPoly
from .bounds import (
    best_size_formula,
    catalecticant_rank,
    check_thm14,
    log_limit_table,
    lower_bound,
    subgeneric_threshold,
    upper_bound_thm11,
    upper_bound_thm42,
)
from .certify import to_numeric_terms, verify_exact, verify_numeric
from .formulas import builtin, closed_formula, stroud_family
from .partitions import check_partition_bounds, enumerate_partitions, p_k

F = Fraction


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title} ({self.seconds:.1f}s)"


# Reference weights as multiples of 1/scale, frozen verbatim (s=4 and s=5 each
# carry one wrong entry; the builtins in formulas.py hold the corrected values).
REFERENCE_WEIGHTS = {
    2: (6, [NPoly.constant(1), 2 * (4 - N)]),
    3: (60, [NPoly.constant(1), 2 * (5 - N), 2 * (N ** 2 - 9 * N + 38)]),
    4: (840, [NPoly.constant(1), 2 * (6 - N), F(2, 3) * (3 * N ** 2 - 33 * N + 76),
              NPoly.constant(F(2, 3)), F(-4, 3) * (N ** 3 - 15 * N ** 2 + 317 * N - 918)]),
    5: (15120, [NPoly.constant(1), -2 * (N - 7), 2 * (N ** 2 - 13 * N + 36), NPoly.constant(F(2, 3)),
                F(4, 3) * (N ** 3 - 18 * N ** 2 + 90 * N - 226), F(-4, 3) * (N - 4),
                F(2, 3) * (N ** 4 - 22 * N ** 3 + 2195 * N ** 2 - 15086 * N + 35592)]),
}

# Reference size polynomials; builtin name -> (s, polynomial, first n)
REFERENCE_SIZES = {
    "s2": (2, N ** 2, 2),
    "s3": (3, F(2, 3) * N ** 3 - N ** 2 + F(4, 3) * N, 3),
    "s4-real": (4, F(1, 3) * (N ** 4 - 4 * N ** 3 + 14 * N ** 2 - 8 * N), 4),
    "s4-gaussian": (4, F(1, 3) * N ** 4 - F(4, 3) * N ** 3 + F(11, 3) * N ** 2 - F(5, 3) * N, 4),
    "s5": (5, F(2, 15) * N ** 5 - N ** 4 + F(16, 3) * N ** 3 - 8 * N ** 2 + F(68, 15) * N, 5),
}


def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "symbolic reproduction of the closed formulas", True)
    for s, (scale, want) in REFERENCE_WEIGHTS.items():
        sym = generate_symbolic(s)
        got = sym.scaled_weights(F(scale))
        if sym.scale != scale:
            res.passed = False
            res.details.append(f"s={s}: scale {sym.scale} != {scale}")
        for j, (g, w) in enumerate(zip(got, want)):
            if g != w:
                res.passed = False
                res.details.append(f"s={s}: weight {j + 1} of f_{sym.terms[j].k}{sym.terms[j].point}: "
                                   f"solver {g.factored_str()} vs reference {w.factored_str()}")
        if len(got) != len(want):
            res.passed = False
            res.details.append(f"s={s}: {len(got)} weights vs {len(want)}")
    return res


CRITERION_2_RANGES = {
    "s2": range(3, 10),
    "s3": range(3, 9),
    "s4-real": range(4, 8),
    "s4-gaussian": range(4, 8),
    "s5": range(5, 8),
    "q8s2": range(8, 9),
}


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "exact verification of the builtins", True)
    for name, ns in CRITERION_2_RANGES.items():
        for n in ns:
            out = verify_exact(builtin(name, n))
            if not out.ok:
                res.passed = False
                res.details.append(f"{name} n={n}: {out.describe()}")
    return res


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "special sizes 45, 216, 1029", True)
    for name, n, want in [("s3", 5, 45), ("s4-real", 6, 216), ("s5", 7, 1029)]:
        got = builtin(name, n).size
        res.details.append(f"{name} n={n}: size {got} (expected {want})")
        res.passed &= got == want
    return res


def exceptional_ns(name: str, ns) -> list:
    """n at which some weight of the named formula vanishes."""
    f = closed_formula(name)
    return [n for n in ns if any(w(n) == 0 for _, w in f.terms)]


def criterion_4() -> CriterionResult:
    res = CriterionResult(4, "size polynomials on the generic range, n <= 12", True)
    for name, (s, poly, n0) in REFERENCE_SIZES.items():
        ns = range(n0, 13)
        skip = exceptional_ns(name, ns)
        for n in ns:
            if n in skip:
                continue
            got = builtin(name, n).size
            if got != poly(n):
                res.passed = False
                res.details.append(f"{name} n={n}: size {got} != {poly(n)}")
        res.details.append(f"{name}: vanishing weights at n in {skip}")
    return res


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "naive s=4 ansatz is inconsistent", True)
    for n in (4, 5, 6):
        r, ra = consistency_ranks(assemble_system(naive_spec(4), n))
        res.details.append(f"n={n}: rank {r}, augmented rank {ra}")
        res.passed &= ra > r
    return res


def criterion_6(seeds=(0, 1, 2)) -> CriterionResult:
    res = CriterionResult(6, "generator contract for s <= 5, s <= n <= 8", True)
    for s in range(1, 6):
        for n in range(s, 9):
            for seed in seeds:
                d = generate(n, s, seed=seed)
                ok = verify_exact(d).ok
                inside = lower_bound(n, s) <= d.size <= upper_bound_thm42(n, s)
                if not (ok and inside):
                    res.passed = False
                    res.details.append(f"n={n} s={s} seed={seed}: verified={ok}, size={d.size}")
    return res


def catalecticant_grid(max_dim: int = 500, s_cap: int = 499) -> list:
    """All ``(n, s)`` with ``C(s+n-1, s) <= max_dim`` and ``s <= s_cap``.

    For n = 1 the dimension is 1 for every s, so the cap is what makes the
    grid finite; ``s_cap = 499`` is where n = 2 reaches dimension 500.
    """
    out = []
    n = 1
    while math.comb(n, 1) <= max_dim:
        s = 1
        while s <= s_cap and math.comb(s + n - 1, s) <= max_dim:
            out.append((n, s))
            s += 1
        n += 1
    return out


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "catalecticant has full rank (dimension <= 500)", True)
    grid = catalecticant_grid()
    for n, s in grid:
        if catalecticant_rank(n, s) != lower_bound(n, s):
            res.passed = False
            res.details.append(f"n={n} s={s}: rank deficient")
    res.details.append(f"{len(grid)} (n, s) pairs checked")
    return res


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "subgenericity thresholds", True)
    for s, formula, want in [(3, "s3", 11), (4, "s4-real", 10), (5, "s5", 8)]:
        got = subgeneric_threshold(s, formula)
        res.details.append(f"s={s} ({formula}): {got} (expected {want})")
        res.passed &= got == want
    got = subgeneric_threshold(2, "s2")
    res.details.append(f"s=2 (size n^2): {got} (stated 17)")
    res.passed &= got <= 17
    return res


def criterion_9(smax: int = 20) -> CriterionResult:
    res = CriterionResult(9, "desk check at n = (2s-1)^2 + 1 with the general bound, 2 <= s <= 20", True)
    for s in range(2, smax + 1):
        r = check_thm14(s, "thm42")
        if not r.passed:
            res.passed = False
            res.details.append(f"s={s} n={r.n}: bound {r.size} vs generic {float(r.generic_exact):.6g} "
                               f"(ratio {r.ratio:.3f}), step {'ok' if r.step_holds else 'fails'}")
    for s in range(2, 6):
        r = check_thm14(s, best_size_formula(s))
        res.details.append(f"s={s} with {r.size_formula}: size {r.size} vs {float(r.generic_exact):.6g} "
                           f"-> {'holds' if r.passed else 'fails'}")
    return res


def log_gaps(s: int, ns=(10 ** 2, 10 ** 3, 10 ** 4)) -> tuple:
    rows = log_limit_table(s, ns)
    return [abs(s - r.log_lower) for r in rows], [abs(r.log_upper - s) for r in rows]


def _upper_is_exact_power(s: int, ns) -> bool:
    return all(upper_bound_thm11(n, s) == n ** s for n in ns)


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "log-limit trend", True)
    ns = (10 ** 2, 10 ** 3, 10 ** 4)
    for s in (2, 3):
        low, up = log_gaps(s, ns)
        for label, gaps in (("lower", low), ("upper", up)):
            if label == "upper" and _upper_is_exact_power(s, ns):
                # the upper bound equals n^s exactly, so its gap is identically 0
                res.details.append(f"s={s} upper: bound is exactly n^{s}, gap 0 at every n")
                continue
            dec = all(a > b for a, b in zip(gaps, gaps[1:]))
            res.details.append(f"s={s} {label} gaps: {', '.join(f'{g:.4f}' for g in gaps)}")
            res.passed &= dec and gaps[-1] < 0.35
    return res


def criterion_11() -> CriterionResult:
    res = CriterionResult(11, "numeric verification of the quadrature family", True)
    for n in (3, 5, 9):
        for branch in (1, -1):
            out = verify_numeric(stroud_family(n, branch).terms, n, 2, 1e-25)
            if not out.ok:
                res.passed = False
                res.details.append(f"n={n} branch={branch}: {out.describe()}")
    out = verify_numeric(to_numeric_terms(builtin("q8s2", 8)), 8, 2, 1e-25)
    if not out.ok:
        res.passed = False
        res.details.append(f"q8s2 as floats: {out.describe()}")
    return res


def criterion_12() -> CriterionResult:
    res = CriterionResult(12, "partition counts and partition inequalities", True)
    for s in range(1, 26):
        for k in range(1, s + 1):
            if p_k(s, k) != len(enumerate_partitions(s, k)):
                res.passed = False
                res.details.append(f"p_{k}({s}) recurrence disagrees with enumeration")
    half_fail = []
    for s in range(1, 95):
        rep = check_partition_bounds(s)
        if not rep.passed:
            res.passed = False
            res.details.append(f"s={s}: partition bounds fail")
        if not all(rep.merca_half.values()):
            half_fail.append(s)
    res.details.append(f"halved binomial bound fails for s in {half_fail}")
    return res


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


def run_all(selected=None, progress=None) -> list:
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if selected and i not in selected:
            continue
        t = time.perf_counter()
        r = fn()
        r.seconds = time.perf_counter() - t
        if progress:
            progress(r)
        out.append(r)
    return out
