"""Arbitrary-precision real evaluation.

BigReal wraps an mpmath float together with its working precision in
decimal digits.  Every kernel computes internally with ``digits + GUARD``
decimal digits and reports at ``digits``; binary operations carry the
minimum of the operand precisions.

The precision context of the float backend is process-global, so these
functions are not safe to call concurrently from threads.  Run independent
evaluations in separate processes instead (the CLI report runner does).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf

from .series import PuiseuxSeries, ThetaSpec

GUARD = 15
MIN_DIGITS = 20

Number = Union[int, Fraction, str, mpf, "BigReal"]

__all__ = [
    "BigReal",
    "EvalPoint",
    "GUARD",
    "MIN_DIGITS",
    "big_real",
    "pi_at",
    "agm",
    "ellipk",
    "last_agm_iterations",
    "singular_modulus",
    "inverse_modulus",
    "nome_from_r",
    "theta_sum",
    "eval_theta",
    "eval_eta",
    "eval_A",
    "eval_h5",
    "eval_eta5",
    "real_eval_series",
    "SeriesEval",
    "tolerance",
]


class PrecisionError(ValueError):
    pass


class CertificationError(ArithmeticError):
    """An internal consistency check failed beyond tolerance."""


def _to_mpf(x, wdps: int) -> mpf:
    if isinstance(x, BigReal):
        return x.value
    if isinstance(x, mpf):
        return x
    with mp.workdps(wdps):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return mpf(x)


@dataclass(frozen=True)
class BigReal:
    """Arbitrary-precision real with explicit decimal working precision."""

    value: mpf
    digits: int

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise PrecisionError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")

    def _wd(self) -> int:
        return self.digits + GUARD

    def _bin(self, other, fn) -> "BigReal":
        if isinstance(other, BigReal):
            digits = min(self.digits, other.digits)
        else:
            digits = self.digits
        wd = digits + GUARD
        with mp.workdps(wd):
            return BigReal(fn(self.value, _to_mpf(other, wd)), digits)

    def __add__(self, other):
        return self._bin(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._bin(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._bin(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._bin(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._bin(other, lambda a, b: b / a)

    def __neg__(self):
        return BigReal(-self.value, self.digits)

    def __abs__(self):
        return BigReal(abs(self.value), self.digits)

    def __pow__(self, e):
        """Principal real power for int or rational exponents."""
        if isinstance(e, int):
            with mp.workdps(self._wd()):
                return BigReal(self.value ** e, self.digits)
        e = Fraction(e)
        with mp.workdps(self._wd()):
            if self.value < 0:
                raise ValueError("fractional power of a negative value")
            return BigReal(
                mpmath.exp(mpmath.log(self.value) * mpf(e.numerator) / e.denominator),
                self.digits,
            )

    def sqrt(self) -> "BigReal":
        with mp.workdps(self._wd()):
            return BigReal(mpmath.sqrt(self.value), self.digits)

    def exp(self) -> "BigReal":
        with mp.workdps(self._wd()):
            return BigReal(mpmath.exp(self.value), self.digits)

    def log(self) -> "BigReal":
        with mp.workdps(self._wd()):
            return BigReal(mpmath.log(self.value), self.digits)

    def _cmp_value(self, other):
        return other.value if isinstance(other, BigReal) else _to_mpf(other, self._wd())

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __eq__(self, other):
        if isinstance(other, (BigReal, int, Fraction, mpf, float)):
            return self.value == self._cmp_value(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return float(self.value)

    def nstr(self, n: int | None = None) -> str:
        return mpmath.nstr(self.value, n or self.digits)

    def __repr__(self):
        return f"BigReal({mpmath.nstr(self.value, min(self.digits, 25))}, digits={self.digits})"


def big_real(x: Number, digits: int) -> BigReal:
    if isinstance(x, BigReal):
        return BigReal(x.value, min(digits, x.digits))
    return BigReal(_to_mpf(x, digits + GUARD), digits)


def pi_at(digits: int) -> BigReal:
    with mp.workdps(digits + GUARD):
        return BigReal(+mp.pi, digits)


def tolerance(digits: int, guard: int = 10) -> mpf:
    """10^(-digits+guard) as a float at modest precision."""
    with mp.workdps(30):
        return mpf(10) ** (-digits + guard)


def agm(a0, b0, wdps: int) -> tuple[mpf, int]:
    """Arithmetic-geometric mean at ``wdps`` decimal digits; returns the
    limit and the iteration count (quadratic convergence)."""
    with mp.workdps(wdps):
        a, b = mpf(a0), mpf(b0)
        eps = mpf(10) ** (-(wdps - 2))
        scale = max(abs(a), abs(b))
        count = 0
        while abs(a - b) > eps * scale:
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
            count += 1
            if count > 10000:
                raise CertificationError("AGM failed to converge")
        return a, count


_last_agm_iterations = 0


def last_agm_iterations() -> int:
    return _last_agm_iterations


def ellipk(x: Number, digits: int | None = None) -> BigReal:
    """Complete elliptic integral of the first kind as a function of the
    modulus, K(x) = pi / (2 agm(1, sqrt(1-x^2))), for 0 <= x < 1."""
    global _last_agm_iterations
    if isinstance(x, BigReal) and digits is None:
        digits = x.digits
    if digits is None:
        raise PrecisionError("digits required when x is not a BigReal")
    wd = digits + GUARD
    xv = _to_mpf(x, wd)
    if xv < 0:
        raise ValueError("modulus must be nonnegative")
    if xv >= 1:
        raise ValueError("modulus must be < 1")
    with mp.workdps(wd):
        kp = mpmath.sqrt(1 - xv * xv)
        m_val, iters = agm(mpf(1), kp, wd)
        _last_agm_iterations = iters
        return BigReal(+mp.pi / (2 * m_val), digits)


def nome_from_r(r: Number, digits: int) -> BigReal:
    """q = exp(-pi sqrt(r)) for r > 0."""
    wd = digits + GUARD
    rv = _to_mpf(r, wd)
    if rv <= 0:
        raise ValueError("r must be positive")
    with mp.workdps(wd):
        return BigReal(mpmath.exp(-mp.pi * mpmath.sqrt(rv)), digits)


@dataclass(frozen=True)
class EvalPoint:
    """A singular argument: r, its nome q, the modulus k and k'."""

    r: object
    q: BigReal
    k: BigReal
    kprime: BigReal


def singular_modulus(r: Number, digits: int) -> EvalPoint:
    """Singular modulus k_r computed from the nome via the classical theta
    quotient, then certified against the defining period-ratio equation."""
    wd = digits + GUARD
    q = nome_from_r(r, digits)
    with mp.workdps(wd):
        qv = q.value
        lq = mpmath.log(qv)
        eps = mpf(10) ** (-wd)
        # theta2 core: 2 q^(1/4) sum q^(n^2+n); theta3: 1 + 2 sum q^(n^2)
        s2 = mpf(1)
        n = 1
        while True:
            t = mpmath.exp((n * n + n) * lq)
            s2 += t
            if t < eps:
                break
            n += 1
        s3 = mpf(1)
        n = 1
        while True:
            t = 2 * mpmath.exp(n * n * lq)
            s3 += t
            if t < eps:
                break
            n += 1
        theta2_sq = 4 * mpmath.sqrt(qv) * s2 * s2
        theta3_sq = s3 * s3
        kv = theta2_sq / theta3_sq
        kpv = mpmath.sqrt(1 - kv * kv)
    k = BigReal(kv, digits)
    kprime = BigReal(kpv, digits)
    # certification: K(k')/K(k) must reproduce sqrt(r)
    ratio = ellipk(kprime, digits) / ellipk(k, digits)
    with mp.workdps(wd):
        resid = abs(ratio.value - mpmath.sqrt(_to_mpf(r, wd)))
        if resid > mpf(10) ** (-digits + 5):
            raise CertificationError(
                f"singular modulus certification failed at r={r}: residual {resid}"
            )
    return EvalPoint(r=r, q=q, k=k, kprime=kprime)


def inverse_modulus(x: Number, digits: int | None = None) -> BigReal:
    """k_i(x) = (K(sqrt(1-x^2)) / K(x))^2 for 0 < x < 1."""
    if isinstance(x, BigReal) and digits is None:
        digits = x.digits
    if digits is None:
        raise PrecisionError("digits required when x is not a BigReal")
    wd = digits + GUARD
    xv = _to_mpf(x, wd)
    if not (0 < xv < 1):
        raise ValueError("inverse modulus needs 0 < x < 1")
    with mp.workdps(wd):
        xp = mpmath.sqrt(1 - xv * xv)
    ratio = ellipk(BigReal(xp, digits)) / ellipk(BigReal(xv, digits))
    return ratio * ratio


def theta_sum(
    a: Fraction | int,
    b: Fraction | int,
    q: BigReal,
    digits: int | None = None,
    alternating: bool = True,
) -> BigReal:
    """Bilateral sum of (+-1)^n q^(a n^2 + b n), truncated where the terms
    drop below the working tolerance (explicit quadratic tail bound)."""
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0:
        raise ValueError("theta evaluation requires a > 0")
    if digits is None:
        digits = q.digits
    wd = digits + GUARD
    qv = q.value
    if not (0 < qv < 1):
        raise ValueError("theta evaluation requires 0 < q < 1")
    with mp.workdps(wd):
        lq = mpmath.log(qv)
        # smallest n0 with a n0^2 - |b| n0 > (digits + GUARD) / log10(1/q)
        need = wd / (-lq / mpmath.log(10))
        af, bf = float(a), abs(float(b))
        n0 = int((bf + math.sqrt(bf * bf + 4 * af * float(need))) / (2 * af)) + 2
        total = mpf(0)
        for n in range(-n0, n0 + 1):
            e = a * n * n + b * n
            term = mpmath.exp(mpf(e.numerator) / e.denominator * lq)
            if alternating and n % 2 != 0:
                total -= term
            else:
                total += term
        return BigReal(total, digits)


def eval_theta(a, b, q: BigReal, digits: int | None = None) -> BigReal:
    return theta_sum(a, b, q, digits, alternating=True)


def eval_eta(p, q: BigReal, digits: int | None = None) -> BigReal:
    """prod_{n>=1} (1 - q^(np)) with the tail cut once q^(np) is below the
    working tolerance."""
    p = Fraction(p)
    if p <= 0:
        raise ValueError("eta scale must be positive")
    if digits is None:
        digits = q.digits
    wd = digits + GUARD
    qv = q.value
    if not (0 < qv < 1):
        raise ValueError("eta evaluation requires 0 < q < 1")
    with mp.workdps(wd):
        lq = mpmath.log(qv)
        eps = mpf(10) ** (-wd)
        total = mpf(1)
        n = 1
        while True:
            e = p * n
            term = mpmath.exp(mpf(e.numerator) / e.denominator * lq)
            if term < eps:
                break
            total *= 1 - term
            n += 1
        return BigReal(total, digits)


def eval_A(spec: ThetaSpec, q: BigReal, digits: int | None = None) -> BigReal:
    """Direct numeric value of the theta quotient at a real nome."""
    if digits is None:
        digits = q.digits
    wd = digits + GUARD
    with mp.workdps(wd):
        lq = mpmath.log(q.value)
        d = spec.delta
        pref = mpmath.exp(mpf(d.numerator) / d.denominator * lq)
    th = theta_sum(spec.p / 2, spec.p / 2 - spec.a, q, digits)
    et = eval_eta(spec.p, q, digits)
    with mp.workdps(wd):
        return BigReal(pref * th.value / et.value, digits)


def eval_h5(x: BigReal, digits: int | None = None) -> BigReal:
    """eta(x^(1/5)) / (x^(1/5) eta(x^5)) at a real argument in (0,1)."""
    if digits is None:
        digits = x.digits
    x15 = x ** Fraction(1, 5)
    return eval_eta(1, x15, digits) / (x15 * eval_eta(1, x ** 5, digits))


def eval_eta5(x: BigReal, digits: int | None = None) -> BigReal:
    """Positive root of y^2 + (1 + h5(x)) y - 1 = 0, written with the
    radical (-1 - h5 + sqrt(5 + 2 h5 + h5^2)) / 2."""
    h = eval_h5(x, digits)
    return ((5 + 2 * h + h * h).sqrt() - 1 - h) / 2


@dataclass(frozen=True)
class SeriesEval:
    """Numeric value of a truncated series, with a tail-size heuristic."""

    value: BigReal
    tail_estimate: mpf
    low_confidence: bool


def real_eval_series(u: PuiseuxSeries, q: BigReal, digits: int | None = None) -> SeriesEval:
    """Evaluate an exact series at a real nome in (0,1).

    The result is flagged low-confidence when the magnitude of the last
    retained term is not below 10^(-digits); the truncation tail is not
    otherwise bounded here.
    """
    if digits is None:
        digits = q.digits
    wd = digits + GUARD
    qv = q.value
    if not (0 < qv < 1):
        raise ValueError("series evaluation requires 0 < q < 1")
    with mp.workdps(wd):
        lq = mpmath.log(qv)
        total = mpf(0)
        last = mpf(0)
        for k in sorted(u.coeffs):
            c = u.coeffs[k]
            term = (
                mpf(c.numerator)
                / c.denominator
                * mpmath.exp(mpf(k) / u.denom * lq)
            )
            total += term
            last = term
        if u.hi is None:
            tail = mpf(0)
        elif u.coeffs:
            tail = abs(last)
        else:
            tail = mpmath.exp(mpf(u.hi) / u.denom * lq)
        low = bool(tail > mpf(10) ** (-digits))
        return SeriesEval(BigReal(total, digits), tail, low)
