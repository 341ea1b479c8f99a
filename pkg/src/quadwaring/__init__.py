"""Exact Waring decompositions of powers of the quadratic form ``x_1^2 + ... + x_n^2``.

Typical use::

    from quadwaring import generate, verify_exact
    d = generate(5, 3)          # q_5^3 as 45 weighted 6th powers
    assert verify_exact(d).ok
"""

__version__ = "0.1.0"

from .ansatz import (
    AnsatzSpec,
    ConditionSystem,
    Decomposition,
    SymbolicDecomposition,
    assemble_system,
    generate,
    generate_symbolic,
    select_points,
    solve_system,
)
from .arith import GaussianRational, NPoly, Rational
from .bounds import (
    BoundsReport,
    bounds_report,
    catalecticant_rank,
    check_thm14,
    generic_rank,
    log_limit_table,
    lower_bound,
    subgeneric_threshold,
    upper_bound_thm11,
    upper_bound_thm42,
)
from .certify import VerificationOutcome, deserialize, serialize, verify_exact, verify_numeric
from .formulas import builtin, stroud_family
from .partitions import Partition, enumerate_partitions, p, p_k
from .sympoly import SparsePoly, expand_q_power, monomial_symmetric

__all__ = [
    "AnsatzSpec", "BoundsReport", "ConditionSystem", "Decomposition", "GaussianRational",
    "NPoly", "Partition", "Rational", "SparsePoly", "SymbolicDecomposition",
    "VerificationOutcome", "assemble_system", "bounds_report", "builtin", "catalecticant_rank",
    "check_thm14", "deserialize", "enumerate_partitions", "expand_q_power", "generate",
    "generate_symbolic", "generic_rank", "log_limit_table", "lower_bound", "monomial_symmetric",
    "p", "p_k", "select_points", "serialize", "solve_system", "stroud_family",
    "subgeneric_threshold", "upper_bound_thm11", "upper_bound_thm42", "verify_exact",
    "verify_numeric",
]
