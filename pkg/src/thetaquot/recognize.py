"""Recognition of algebraic numbers from high-precision real values.

``recognize`` searches for a small integer polynomial vanishing at x by
lattice basis reduction on the vector (1, x, x^2, ..., x^d) scaled by
10^precision, trying degrees in ascending order; every candidate must be
re-certified at doubled working precision and must keep its coefficients
well below the information content of the input.  ``recognize_rational``
is the continued-fraction special case with an explicit denominator bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
from mpmath import mp

from .numeric import GUARD, BigReal

__all__ = ["IntPoly", "NotFound", "recognize", "recognize_rational", "lll_reduce"]

LLL_DELTA = Fraction(99, 100)
CERT_EXPONENT = Fraction(6, 10)  # |P(x)| must be below 10^(-0.6*digits)
COEFF_EXPONENT = Fraction(3, 10)  # max |coeff| must stay below 10^(0.3*digits)


class NotFound(Exception):
    """No certified polynomial/rational; the message says which budget was
    exhausted (degree bound or precision)."""


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients low degree first, content 1,
    positive leading coefficient."""

    coeffs: tuple[int, ...]

    @classmethod
    def normalized(cls, coeffs) -> "IntPoly":
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial is not a valid recognition")
        g = 0
        for c in cs:
            g = gcd(g, abs(c))
        cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval_mpf(self, x: mpmath.mpf) -> mpmath.mpf:
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        parts = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            if e == 0:
                mon = str(abs(c))
            else:
                xe = "x" if e == 1 else f"x^{e}"
                mon = xe if abs(c) == 1 else f"{abs(c)}*{xe}"
            parts.append(("- " if c < 0 else "+ ") + mon)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json_obj(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json_obj(cls, obj) -> "IntPoly":
        return cls.normalized([int(c) for c in obj])


# ---------------------------------------------------------------------------
# exact LLL
# ---------------------------------------------------------------------------


def _gram_schmidt(b: list[list[int]]):
    n = len(b)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for i in range(n):
        w = [Fraction(x) for x in b[i]]
        mu[i][i] = Fraction(1)
        for j in range(i):
            if norms[j]:
                mu[i][j] = _dot(b[i], bstar[j]) / norms[j]
                w = [w[k] - mu[i][j] * bstar[j][k] for k in range(len(w))]
        bstar.append(w)
        norms.append(_dot(w, w))
    return mu, norms


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def lll_reduce(basis: list[list[int]], delta: Fraction = LLL_DELTA) -> list[list[int]]:
    """Integer LLL with exact rational Gram-Schmidt data (Lovasz parameter
    delta), maintained incrementally across size reductions and swaps.
    Suitable for the small dimensions used here."""
    b = [row[:] for row in basis]
    n = len(b)
    mu, norms = _gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            m = mu[k][j]
            if abs(m) > Fraction(1, 2):
                r = round(m)
                b[k] = [b[k][t] - r * b[j][t] for t in range(len(b[k]))]
                for t in range(j):
                    mu[k][t] -= r * mu[j][t]
                mu[k][j] -= r
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
            continue
        # swap b_{k-1} and b_k, updating the GSO data in place
        m = mu[k][k - 1]
        bk1_new = norms[k] + m * m * norms[k - 1]
        if not bk1_new:
            raise ValueError("LLL input basis is not of full rank")
        mu_new = m * norms[k - 1] / bk1_new
        norms[k] = norms[k - 1] * norms[k] / bk1_new
        norms[k - 1] = bk1_new
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        mu[k][k - 1] = mu_new
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu_new * mu[i][k]
        k = max(k - 1, 1)
    return b


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------


def _certify(poly: IntPoly, x: BigReal, digits: int) -> bool:
    """Re-evaluate at doubled working precision; certify only when the
    residual is overwhelmingly small and the coefficient vector carries far
    less information than the input supplied (wide overdetermination
    margin).  A lattice artifact at the wrong degree has coefficients of
    roughly digits/(d+2) decimal digits each, so the information cap is on
    the total bitsize of the vector."""
    cap_bits = int(COEFF_EXPONENT * digits * 3.321928)
    total_bits = sum(abs(c).bit_length() for c in poly.coeffs)
    if total_bits > cap_bits:
        return False
    with mp.workdps(30):
        cert_tol = mpmath.mpf(10) ** (-float(CERT_EXPONENT * digits))
    with mp.workdps(2 * digits + GUARD):
        return abs(poly.eval_mpf(x.value)) < cert_tol


def recognize(x: BigReal, d_max: int, digits: int | None = None) -> IntPoly:
    """Smallest-degree certified integer polynomial vanishing at x.

    Degrees are tried in ascending order; within a degree, the reduced
    lattice vectors are tried by norm.  Raises NotFound with a diagnostic
    naming the exhausted budget.
    """
    if digits is None:
        digits = x.digits
    digits = min(digits, x.digits)
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    scale = 10 ** digits
    with mp.workdps(digits + GUARD):
        powers = [mpmath.mpf(1)]
        for _ in range(d_max):
            powers.append(powers[-1] * x.value)
        cols = [int(mpmath.nint(scale * p)) for p in powers]
    for d in range(1, d_max + 1):
        basis = []
        for i in range(d + 1):
            row = [0] * (d + 1) + [cols[i]]
            row[i] = 1
            basis.append(row)
        reduced = lll_reduce(basis)
        ranked = sorted(reduced, key=lambda r: _dot(r, r))
        for vec in ranked:
            cs = vec[: d + 1]
            if not any(cs) or not any(cs[1:]):
                continue  # constant or zero rows carry no algebraic content
            poly = IntPoly.normalized(cs)
            if poly.degree < 1:
                continue
            if _certify(poly, x, digits):
                return poly
    budget = 20 * (d_max + 1)
    hint = (
        f"precision {digits} is below the identification budget {budget} "
        f"for degree {d_max}; raise digits"
        if digits < budget
        else f"no relation up to degree {d_max}; raise d_max or digits"
    )
    raise NotFound(f"no certified integer polynomial found: {hint}")


def recognize_rational(
    x: BigReal, digits: int | None = None, den_bound: int = 10 ** 9
) -> Fraction:
    """Best continued-fraction convergent with denominator <= den_bound,
    accepted only when it reproduces x to 10^(-digits+guard), guard 5."""
    if digits is None:
        digits = x.digits
    digits = min(digits, x.digits)
    import math

    num, den = mpmath.libmp.to_rational(x.value._mpf_)
    exact = Fraction(int(num), int(den))
    # walk the continued fraction of the binary-exact value
    a0 = math.floor(exact)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    frac = exact - a0
    best = Fraction(p_cur, q_cur)
    while frac:
        frac = 1 / frac
        a = math.floor(frac)
        frac -= a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        if q_cur > den_bound:
            break
        best = Fraction(p_cur, q_cur)
    with mp.workdps(digits + GUARD):
        err = abs(x.value - mpmath.mpf(best.numerator) / best.denominator)
        if err < mpmath.mpf(10) ** (-digits + 5):
            return best
    raise NotFound(
        f"no rational with denominator <= {den_bound} reproduces the value "
        f"to 10^(-{digits}+5)"
    )
