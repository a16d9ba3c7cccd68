"""Continued fractions and Brjuno partial sums.

An input angle is turned into an enclosure [lo, hi] with exact rational
endpoints.  The Gauss map x -> 1/x - floor(1/x) is monotone on each branch, so
the enclosure can be pushed through it exactly; a quotient is accepted only
when both ends agree on it.  This is what "certified" means below.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

MAX_BITS = 10**7


class RationalInputError(ValueError):
    pass


@dataclass
class ContinuedFraction:
    quotients: list  # a_1 .. a_N
    convergents: list  # (p_0, q_0) = (0, 1), (p_1, q_1), ...
    truncated: bool = False
    reason: str = ""

    @classmethod
    def from_quotients(cls, quotients, truncated=False, reason=""):
        return cls(list(quotients), convergents(quotients), truncated, reason)

    @property
    def q(self) -> list[int]:
        return [q for _, q in self.convergents]

    @property
    def p(self) -> list[int]:
        return [p for p, _ in self.convergents]

    def value(self, prec: int = 256):
        p, q = self.convergents[-1]
        with mpmath.workprec(prec):
            return mpmath.mpf(p) / q

    def to_dict(self):
        return {
            "quotients": self.quotients,
            "convergents": [[p, q] for p, q in self.convergents],
            "truncated": self.truncated,
            "reason": self.reason,
        }


def convergents(quotients) -> list[tuple[int, int]]:
    p2, q2 = 1, 0  # p_{-1}, q_{-1}
    p1, q1 = 0, 1  # p_0, q_0
    out = [(p1, q1)]
    for a in quotients:
        a = int(a)
        if a < 1:
            raise ValueError("partial quotients must be positive integers")
        p1, p2 = a * p1 + p2, p1
        q1, q2 = a * q1 + q2, q1
        out.append((p1, q1))
    return out


def enclosure(theta) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of theta.

    * ``Fraction`` / int / ``"p/q"``: degenerate enclosure (exact rational);
    * decimal string: the stated digits, plus or minus half a unit in the last place;
    * ``mpmath.mpf``: plus or minus one ulp at the larger of the global
      precision and the width of its mantissa;
    * ``mpmath.mpi`` interval, or a (lo, hi) pair: taken as given.
    """
    if isinstance(theta, (Fraction, int)):
        t = Fraction(theta)
        return t, t
    if isinstance(theta, str):
        s = theta.strip()
        if "/" in s:
            t = Fraction(s)
            return t, t
        t = Fraction(s)
        mant = s.lower().split("e")[0]
        digits = len(mant.split(".")[1]) if "." in mant else 0
        exp = int(s.lower().split("e")[1]) if "e" in s.lower() else 0
        half = Fraction(1, 2) * Fraction(10) ** (exp - digits)
        return t - half, t + half
    if isinstance(theta, tuple):
        return Fraction(theta[0]), Fraction(theta[1])
    if isinstance(theta, mpmath.ctx_iv.ivmpf):
        return _iv_bounds(theta)
    if isinstance(theta, mpmath.mpf):
        t = _mpf_fraction(theta)
        man, exp = theta.man_exp
        man, exp = int(man), int(exp)
        # a normalized mantissa is never wider than the precision it was made at,
        # so its last bit bounds the rounding error even outside workprec
        prec = max(mpmath.mp.prec, man.bit_length())
        ulp = Fraction(2) ** (exp + max(man.bit_length(), 1) - prec) if man else Fraction(0)
        return t - ulp, t + ulp
    if isinstance(theta, float):
        t = Fraction(theta)
        ulp = Fraction(math.ulp(theta))
        return t - ulp, t + ulp
    raise TypeError(f"unsupported angle type {type(theta).__name__}")


def _mpf_fraction(x) -> Fraction:
    # mpf(x) would round to the global precision; read the mantissa as stored
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    man, exp = x.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _iv_bounds(v) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an mpmath interval."""
    lo, hi = v._mpi_
    return _mpf_fraction(mpmath.mp.make_mpf(lo)), _mpf_fraction(mpmath.mp.make_mpf(hi))


def cf_expand(theta, N: int) -> ContinuedFraction:
    """First N partial quotients of theta in (0, 1) by the certified Gauss map."""
    lo, hi = enclosure(theta)
    if lo > hi:
        lo, hi = hi, lo
    if lo == hi and (lo <= 0 or lo >= 1):
        raise ValueError("theta must lie in (0, 1)")
    qs: list[int] = []
    reason = ""
    for _ in range(N):
        if lo == hi == 0:
            raise RationalInputError("remainder vanished exactly: theta is rational")
        if lo <= 0:
            reason = "precision exhausted (enclosure reaches 0)"
            break
        y_lo, y_hi = 1 / hi, 1 / lo
        a = math.floor(y_lo)
        if math.floor(y_hi) != a or y_hi == a + 1:
            reason = "precision exhausted (quotient not certified)"
            break
        qs.append(a)
        lo, hi = y_lo - a, y_hi - a
    if not reason and lo == hi == 0:
        raise RationalInputError("remainder vanished exactly: theta is rational")
    return ContinuedFraction.from_quotients(qs, truncated=bool(reason), reason=reason)


@dataclass
class BrjunoPartialSums:
    terms: list
    partial_sums: list
    prec: int = 64

    @property
    def total(self):
        return self.partial_sums[-1] if self.partial_sums else mpmath.mpf(0)

    def to_dict(self):
        return {
            "terms": [mpmath.nstr(t, 17) for t in self.terms],
            "partial_sums": [mpmath.nstr(s, 17) for s in self.partial_sums],
            "prec_bits": self.prec,
        }


def brjuno_partial_sums(cf: ContinuedFraction, prec: int = 64) -> BrjunoPartialSums:
    """Terms ln(q_{n+1}) / q_n for n = 0 .. len(convergents) - 2."""
    if len(cf.convergents) < 2:
        raise ValueError("need at least two convergents")
    qs = cf.q
    terms, sums = [], []
    with mpmath.workprec(prec):
        acc = mpmath.mpf(0)
        for n in range(len(qs) - 1):
            t = mpmath.log(qs[n + 1]) / qs[n]
            acc += t
            terms.append(+t)
            sums.append(+acc)
    return BrjunoPartialSums(terms, sums, prec)


def convergent_gap_ok(theta, cf: ContinuedFraction) -> bool:
    """|theta - p_n/q_n| < 1/(q_n q_{n+1}) for all n, using the enclosure of theta."""
    lo, hi = enclosure(theta)
    cv = cf.convergents
    for n in range(len(cv) - 1):
        p, q = cv[n]
        q1 = cv[n + 1][1]
        r = Fraction(p, q)
        if max(abs(lo - r), abs(hi - r)) >= Fraction(1, q * q1):
            return False
    return True


@contextmanager
def _iv_prec(bits: int):
    old = mpmath.iv.prec
    mpmath.iv.prec = bits
    try:
        yield
    finally:
        mpmath.iv.prec = old


def exp_growth_rule(q: int, n: int) -> int:
    """a_{n+1} = ceil(e^{q_n} / q_n), computed with a rigorous enclosure."""
    with _iv_prec(int(q * 1.4427) + 64):
        lo, hi = _iv_bounds(mpmath.iv.exp(q))
    a_lo, a_hi = math.ceil(lo / q), math.ceil(hi / q)
    if a_lo != a_hi:
        raise ArithmeticError("enclosure straddles an integer")
    return a_lo


def _ln_ge(x: int, y: int) -> bool:
    """Exact test of ln x >= y for positive integers, i.e. x >= e^y."""
    bits = int(y * 1.4427) + 64
    with _iv_prec(bits):
        lo, hi = _iv_bounds(mpmath.iv.exp(y))
    if x >= hi:
        return True
    if x < lo:
        return False
    raise ArithmeticError("comparison not decided at working precision")


@dataclass
class NonBrjunoResult:
    theta: object
    cf: ContinuedFraction
    certified_terms: int
    certified_sum_lower: int
    truncated: bool
    reason: str = ""
    checks: list = field(default_factory=list)

    def to_dict(self):
        return {
            "theta": mpmath.nstr(self.theta, 30),
            "quotient_bits": [int(a).bit_length() for a in self.cf.quotients],
            "certified_terms": self.certified_terms,
            "certified_sum_lower": self.certified_sum_lower,
            "truncated": self.truncated,
            "reason": self.reason,
        }


def make_non_brjuno(growth_rule=exp_growth_rule, N: int = 5, max_bits: int = MAX_BITS) -> NonBrjunoResult:
    """Build a CF whose first N Brjuno terms are each >= 1, certified exactly.

    Each term ln(q_{n+1})/q_n >= 1 is checked as the integer inequality
    q_{n+1} >= e^{q_n}.  Growth of this kind is violent, so the construction
    stops with ``truncated=True`` as soon as the next quotient would need more
    than ``max_bits`` bits.
    """
    qs_list: list[int] = []
    q_prev, q = 0, 1
    reason = ""
    checks = []
    while len(checks) < N:
        if q * 1.4427 > max_bits:
            reason = f"next quotient needs about {int(q * 1.4427)} bits (budget {max_bits})"
            break
        a = int(growth_rule(q, len(qs_list)))
        qs_list.append(a)
        q_next = a * q + q_prev
        ok = _ln_ge(q_next, q)
        checks.append(ok)
        if not ok:
            reason = f"growth rule failed at n={len(qs_list) - 1}"
            break
        q_prev, q = q, q_next
    cf = ContinuedFraction.from_quotients(qs_list)
    theta = cf.value() if qs_list else mpmath.mpf(0)
    n_ok = 0
    for c in checks:
        if not c:
            break
        n_ok += 1
    return NonBrjunoResult(theta, cf, n_ok, n_ok, bool(reason), reason, checks)


def golden_mean(prec: int = 512):
    with mpmath.workprec(prec):
        return (mpmath.sqrt(5) - 1) / 2
