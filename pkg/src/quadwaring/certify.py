"""Independent verification of decompositions and certificate (de)serialization."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .ansatz import Decomposition
from .arith import GaussianRational, format_rational, parse_rational
from .errors import InvalidArgument, InvalidTolerance, ParseError, VersionUnsupported
from .sympoly import _accumulate_power, expand_q_power, grevlex_key

CERTIFICATE_VERSION = 1


@dataclass(frozen=True)
class VerificationOutcome:
    ok: bool
    first_mismatch: tuple | None  # (monomial, expected, got)
    terms_expanded: int

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"ok ({self.terms_expanded} terms expanded)"
        alpha, want, got = self.first_mismatch
        return f"mismatch at x^{list(alpha)}: expected {want}, got {got}"


# --- exact ------------------------------------------------------------------


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        if isinstance(v, GaussianRational):
            out = math.lcm(out, v.re.denominator, v.im.denominator)
        else:
            out = math.lcm(out, Fraction(v).denominator)
    return out


def _integerize(d: Decomposition):
    """Integer weights and coefficients with one global denominator ``D``:
    ``sum_t W_t (C_t . x)^{2s} = D * sum_t w_t (c_t . x)^{2s}``."""
    deg = 2 * d.s
    scaled = []
    for w, coeffs in d.terms:
        L = _lcm_den(coeffs)
        ints = [c * L for c in coeffs]
        scaled.append((Fraction(w) / L ** deg if not isinstance(w, GaussianRational) else w / L ** deg, ints))
    D = _lcm_den(w for w, _ in scaled)
    out = []
    for w, ints in scaled:
        W = w * D
        W = W.numerator if isinstance(W, Fraction) else W
        out.append((W, [c.numerator if isinstance(c, Fraction) else c for c in ints]))
    return D, out


def _expand_chunk(args) -> dict:
    n, degree, chunk = args
    acc: dict = {}
    for W, coeffs in chunk:
        support = [j for j, c in enumerate(coeffs) if c != 0]
        _accumulate_power(acc, [coeffs[j] for j in support], support, n, degree, W)
    return acc


def _merge(into: dict, part: dict):
    for k, v in part.items():
        into[k] = into.get(k, 0) + v


def verify_exact(d: Decomposition, workers: int = 1) -> VerificationOutcome:
    """Expand ``sum_t w_t (c_t . x)^{2s}`` exactly and compare with ``q_n^s``.

    Weights and coefficients are brought to integers over one common
    denominator first, so the inner loop is integer arithmetic for rational
    input. With ``workers > 1`` the terms are split into contiguous chunks;
    partial sums are exact, so the result does not depend on scheduling.
    """
    if d.field not in ("rational", "gaussian"):
        raise InvalidArgument(f"verify_exact needs an exact field, got {d.field}")
    degree = 2 * d.s
    D, terms = _integerize(d)
    if workers > 1 and len(terms) > workers:
        size = -(-len(terms) // workers)
        chunks = [(d.n, degree, terms[i:i + size]) for i in range(0, len(terms), size)]
        acc: dict = {}
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(_expand_chunk, chunks):
                _merge(acc, part)
    else:
        acc = _expand_chunk((d.n, degree, terms))
    target = expand_q_power(d.n, d.s).terms
    keys = set(target) | {k for k, v in acc.items() if v != 0}
    for alpha in sorted(keys, key=grevlex_key):
        want = target.get(alpha, 0)
        got = acc.get(alpha, 0)
        if got != want * D:
            got_q = _simplify(got / D if not isinstance(got, int) else Fraction(got, D))
            return VerificationOutcome(False, (alpha, Fraction(want), got_q), len(terms))
    return VerificationOutcome(True, None, len(terms))


def _simplify(x):
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


# --- numeric ----------------------------------------------------------------


def _mp(x):
    if isinstance(x, GaussianRational):
        return mpmath.mpc(mpmath.mpf(x.re.numerator) / x.re.denominator,
                          mpmath.mpf(x.im.numerator) / x.im.denominator)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, (int,)):
        return mpmath.mpf(x)
    return mpmath.mpmathify(x)


def to_numeric_terms(d: Decomposition, prec: int = 256) -> list:
    """Round an exact decomposition to mpmath complex floats of ``prec`` bits."""
    with mpmath.workprec(prec):
        return [(mpmath.mpc(_mp(w)), [mpmath.mpc(_mp(c)) for c in cs]) for w, cs in d.terms]


def verify_numeric(terms: Sequence, n: int, s: int, tol: float = 1e-25,
                   prec: int = 256) -> VerificationOutcome:
    """Floating counterpart of :func:`verify_exact` in mpmath complex arithmetic.

    ``terms`` holds ``(weight, coeffs)`` with any values mpmath accepts.
    Passes iff every residual coefficient has magnitude below ``tol``.
    """
    if not tol > 0:
        raise InvalidTolerance(f"tolerance must be positive, got {tol}")
    if prec < 128:
        raise InvalidTolerance("numeric verification needs at least 128 bits")
    degree = 2 * s
    with mpmath.workprec(prec):
        acc: dict = {}
        count = 0
        for w, coeffs in terms:
            coeffs = [_mp(c) for c in coeffs]
            if len(coeffs) != n:
                raise InvalidArgument(f"coefficient vector of length {len(coeffs)} != {n}")
            support = [j for j, c in enumerate(coeffs) if c != 0]
            _accumulate_power(acc, [coeffs[j] for j in support], support, n, degree, _mp(w))
            count += 1
        target = expand_q_power(n, s).terms
        for alpha in sorted(set(target) | set(acc), key=grevlex_key):
            want = _mp(target.get(alpha, 0))
            got = acc.get(alpha, mpmath.mpc(0))
            if abs(got - want) >= tol:
                return VerificationOutcome(False, (alpha, Fraction(target.get(alpha, 0)), complex(got)), count)
    return VerificationOutcome(True, None, count)


# --- certificates -----------------------------------------------------------


def _scalar_out(x):
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return format_rational(x.re)
        return {"im": format_rational(x.im), "re": format_rational(x.re)}
    return format_rational(Fraction(x))


def certificate_scale(d: Decomposition) -> int:
    """Least common denominator of the weights."""
    return _lcm_den(w for w, _ in d.terms)


def to_certificate(d: Decomposition) -> dict:
    from .bounds import bounds_report

    scale = certificate_scale(d)
    rep = bounds_report(d.n, d.s, d.size)
    return {
        "version": CERTIFICATE_VERSION,
        "n": d.n,
        "s": d.s,
        "field": d.field,
        "scale": str(scale),
        "terms": [{"weight": _scalar_out(w * scale), "coeffs": [_scalar_out(c) for c in cs]}
                  for w, cs in d.terms],
        "meta": {
            "provenance": d.provenance,
            "seed": d.seed,
            "size": d.size,
            "bounds": {
                "lower": str(rep.lower_catalecticant),
                "upper11": str(rep.upper_thm11),
                "upper42": str(rep.upper_thm42),
                "generic_exact": format_rational(rep.generic_rank_exact),
                "subgeneric": rep.subgeneric,
            },
        },
    }


def serialize(d: Decomposition) -> bytes:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(to_certificate(d), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _locate(text: str, needle: str) -> tuple:
    i = text.find(needle)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, token=None):
        line = col = None
        if token is not None:
            line, col = _locate(self.text, json.dumps(token))
        raise ParseError(message, line, col)

    def rational(self, raw, what: str) -> Fraction:
        if not isinstance(raw, str):
            self.fail(f"{what} must be a string like \"p\" or \"p/q\"", raw)
        try:
            return parse_rational(raw)
        except (ValueError, ZeroDivisionError) as e:
            self.fail(f"invalid rational {raw!r} in {what}: {e}", raw)

    def scalar(self, raw, what: str):
        if isinstance(raw, dict):
            if set(raw) != {"re", "im"}:
                self.fail(f"Gaussian scalar in {what} needs exactly 're' and 'im'")
            return GaussianRational(self.rational(raw["re"], what), self.rational(raw["im"], what))
        return self.rational(raw, what)


def _require(reader: _Reader, obj: dict, key: str, kind, where: str):
    if key not in obj:
        reader.fail(f"missing field {key!r} in {where}")
    v = obj[key]
    if not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        reader.fail(f"field {key!r} in {where} has the wrong type", v)
    return v


def deserialize(data: bytes | str) -> Decomposition:
    """Parse a certificate produced by :func:`serialize`."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from None
    r = _Reader(text)
    if not isinstance(obj, dict):
        r.fail("certificate must be a JSON object")
    version = _require(r, obj, "version", int, "certificate")
    if version != CERTIFICATE_VERSION:
        raise VersionUnsupported(f"certificate version {version} is not supported")
    n = _require(r, obj, "n", int, "certificate")
    s = _require(r, obj, "s", int, "certificate")
    if n < 1 or s < 1:
        r.fail("n and s must be positive")
    field = _require(r, obj, "field", str, "certificate")
    if field not in ("rational", "gaussian"):
        r.fail(f"unknown field {field!r}", field)
    scale = r.rational(_require(r, obj, "scale", str, "certificate"), "scale")
    if scale == 0:
        r.fail("scale must be nonzero", obj["scale"])
    raw_terms = _require(r, obj, "terms", list, "certificate")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        r.fail("meta must be an object")
    terms = []
    for i, t in enumerate(raw_terms):
        where = f"term {i}"
        if not isinstance(t, dict):
            r.fail(f"{where} must be an object")
        w = r.scalar(t.get("weight"), f"{where} weight") / scale
        coeffs = _require(r, t, "coeffs", list, where)
        if len(coeffs) != n:
            r.fail(f"{where} has {len(coeffs)} coefficients, expected {n}")
        cs = tuple(_simplify(r.scalar(c, f"{where} coeffs")) for c in coeffs)
        if all(c == 0 for c in cs):
            r.fail(f"{where} has an all-zero coefficient vector")
        terms.append((_simplify(w), cs))
    size = meta.get("size")
    if size is not None and size != len(terms):
        r.fail(f"meta.size is {size} but there are {len(terms)} terms")
    seed = meta.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        r.fail("meta.seed must be an integer or null", seed)
    return Decomposition(n, s, field, tuple(terms), meta.get("provenance", "certificate"), seed)
