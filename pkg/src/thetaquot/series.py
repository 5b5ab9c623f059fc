"""Truncated Laurent-Puiseux series over the rationals.

A series lives on the exponent grid (1/denom)*Z.  Coefficients are exact
``fractions.Fraction`` values stored sparsely by grid index.  ``hi`` is the
exclusive knowledge bound on the grid: every coefficient at a grid index
``k < hi`` is known exactly, coefficients at ``k >= hi`` are unknown.  A
series with ``hi is None`` is exactly known everywhere (a Laurent
polynomial).  Finitely many negative exponents are allowed; indices below
the smallest stored key are known to be zero.

All arithmetic computes the tightest sound truncation bound for the result
rather than assuming the operands share one.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Rat = Union[int, Fraction]

__all__ = [
    "PuiseuxSeries",
    "ThetaSpec",
    "invert_unit",
    "exp_series",
    "sqrt_series",
    "rescale",
    "eta_series",
    "theta_series",
    "A_series",
    "A_series_product",
    "modulus_series",
    "nome_sqrt_exp_form",
    "h5_series",
    "eta5_series",
    "theta3_series",
    "theta2_half_series",
]


def _ceil_div(a: int, b: int) -> int:
    # ceil(a/b) for positive b, exact on ints
    return -((-a) // b)


def _grid_bound(order: Rat, denom: int) -> int:
    """Exclusive grid index for the exponent bound ``order``."""
    f = Fraction(order) * denom
    return math.ceil(f)


def _min_bound(*bounds: int | None) -> int | None:
    finite = [b for b in bounds if b is not None]
    return min(finite) if finite else None


class PuiseuxSeries:
    """Sparse exact series on the grid (1/denom)*Z, truncated at ``hi``."""

    __slots__ = ("denom", "coeffs", "hi")

    def __init__(self, denom: int, coeffs: Mapping[int, Rat], hi: int | None):
        if denom < 1:
            raise ValueError("grid denominator must be >= 1")
        cleaned: dict[int, Fraction] = {}
        for k, c in coeffs.items():
            if hi is not None and k >= hi:
                continue  # beyond knowledge, truncate
            c = Fraction(c)
            if c:
                cleaned[int(k)] = c
        # normalize to the smallest grid supporting all nonzero exponents
        if cleaned:
            g = denom
            for k in cleaned:
                g = gcd(g, k)
                if g == 1:
                    break
        else:
            g = denom
        if g > 1:
            cleaned = {k // g: c for k, c in cleaned.items()}
            if hi is not None:
                hi = _ceil_div(hi, g)
            denom //= g
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("PuiseuxSeries is immutable")

    def __reduce__(self):
        return (PuiseuxSeries, (self.denom, self.coeffs, self.hi))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "PuiseuxSeries":
        return cls(1, {}, None)

    @classmethod
    def constant(cls, c: Rat) -> "PuiseuxSeries":
        return cls(1, {0: Fraction(c)}, None)

    @classmethod
    def monomial(cls, c: Rat, exponent: Rat) -> "PuiseuxSeries":
        e = Fraction(exponent)
        return cls(e.denominator, {e.numerator: Fraction(c)}, None)

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Rat, Rat]], order: Rat | None = None
    ) -> "PuiseuxSeries":
        """Build from (exponent, coefficient) pairs; ``order`` is an optional
        exclusive exponent bound."""
        items = [(Fraction(e), Fraction(c)) for e, c in pairs]
        denom = 1
        for e, _ in items:
            denom = denom * e.denominator // gcd(denom, e.denominator)
        coeffs: dict[int, Fraction] = {}
        for e, c in items:
            k = int(e * denom)
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
        hi = None if order is None else _grid_bound(order, denom)
        return cls(denom, coeffs, hi)

    # -- structure ---------------------------------------------------------

    @property
    def lo(self) -> int | None:
        """Lowest possibly-nonzero grid index (``hi`` if all known
        coefficients vanish, ``None`` for the exact zero series)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.hi

    @property
    def is_exact(self) -> bool:
        return self.hi is None

    def is_zero(self) -> bool:
        """True when no known coefficient is nonzero."""
        return not self.coeffs

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the lowest nonzero term."""
        if not self.coeffs:
            raise ValueError("series has no nonzero term within its bound")
        k = min(self.coeffs)
        return Fraction(k, self.denom), self.coeffs[k]

    def coefficient(self, exponent: Rat) -> Fraction:
        """Coefficient at a rational exponent; raises beyond the bound."""
        e = Fraction(exponent)
        k = e * self.denom
        if k.denominator != 1:
            if self.hi is not None and e * self.denom >= self.hi:
                raise ValueError(f"exponent {e} is beyond the truncation bound")
            return Fraction(0)
        k = int(k)
        if self.hi is not None and k >= self.hi:
            raise ValueError(f"exponent {e} is beyond the truncation bound")
        return self.coeffs.get(k, Fraction(0))

    def knowledge_order(self) -> Fraction | None:
        """Exclusive exponent bound of knowledge (None when exact)."""
        return None if self.hi is None else Fraction(self.hi, self.denom)

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        return [
            (Fraction(k, self.denom), self.coeffs[k]) for k in sorted(self.coeffs)
        ]

    # -- alignment ---------------------------------------------------------

    def _rebased(self, denom: int) -> tuple[dict[int, Fraction], int | None]:
        if denom == self.denom:
            return dict(self.coeffs), self.hi
        f = denom // self.denom
        coeffs = {k * f: c for k, c in self.coeffs.items()}
        hi = None if self.hi is None else self.hi * f
        return coeffs, hi

    def _common(self, other: "PuiseuxSeries"):
        n = self.denom * other.denom // gcd(self.denom, other.denom)
        a, ha = self._rebased(n)
        b, hb = other._rebased(n)
        return n, a, ha, b, hb

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "PuiseuxSeries":
        other = _coerce(other)
        n, a, ha, b, hb = self._common(other)
        hi = _min_bound(ha, hb)
        for k, c in b.items():
            a[k] = a.get(k, Fraction(0)) + c
        return PuiseuxSeries(n, a, hi)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries(self.denom, {k: -c for k, c in self.coeffs.items()}, self.hi)

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "PuiseuxSeries":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                # scalar zero: exactly zero wherever self was known
                return PuiseuxSeries(self.denom, {}, self.hi)
            return PuiseuxSeries(
                self.denom, {k: c * v for k, v in self.coeffs.items()}, self.hi
            )
        other = _coerce(other)
        n, a, ha, b, hb = self._common(other)
        if (ha is None and not a) or (hb is None and not b):
            return PuiseuxSeries(1, {}, None)  # exact zero factor
        # sound product bound: an unknown term of one factor (index >= hi)
        # paired with the lowest possibly-nonzero term of the other must not
        # land below the claimed bound
        la = min(a) if a else ha
        lb = min(b) if b else hb
        bound_a = None if ha is None else ha + lb
        bound_b = None if hb is None else hb + la
        hi = _min_bound(bound_a, bound_b)
        out: dict[int, Fraction] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                if hi is not None and k >= hi:
                    continue
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return PuiseuxSeries(n, out, hi)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PuiseuxSeries":
        if not isinstance(n, int):
            raise TypeError("series powers must be integers")
        if n < 0:
            return invert_unit(self) ** (-n)
        result = PuiseuxSeries.constant(1)
        base = self
        e = n
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self.denom == other.denom
            and self.coeffs == other.coeffs
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.denom, tuple(sorted(self.coeffs.items())), self.hi))

    def agrees_with(self, other: "PuiseuxSeries", through: Rat | None = None) -> bool:
        """Coefficient-wise equality below min of the knowledge bounds and
        the optional exponent bound ``through`` (exclusive)."""
        n, a, ha, b, hb = self._common(other)
        hi = _min_bound(ha, hb)
        if through is not None:
            hi = _min_bound(hi, _grid_bound(through, n))
        if hi is None:
            return a == b
        keys = set(a) | set(b)
        return all(
            a.get(k, Fraction(0)) == b.get(k, Fraction(0)) for k in keys if k < hi
        )

    def truncate(self, order: Rat) -> "PuiseuxSeries":
        hi = _grid_bound(order, self.denom)
        return PuiseuxSeries(self.denom, self.coeffs, _min_bound(self.hi, hi))

    # -- display and serialization ------------------------------------------

    def __repr__(self) -> str:
        ts = self.terms()
        if not ts:
            body = "0"
        else:
            parts = []
            for e, c in ts[:8]:
                parts.append(f"{c}*q^({e})" if e else f"{c}")
            body = " + ".join(parts)
            if len(ts) > 8:
                body += " + ..."
        tail = "" if self.hi is None else f" + O(q^({Fraction(self.hi, self.denom)}))"
        return f"<series {body}{tail}>"

    def to_str(self) -> str:
        """Full textual form, deterministic."""
        ts = self.terms()
        if not ts:
            return "0" + ("" if self.hi is None else f" + O(q^({self.knowledge_order()}))")
        parts = [f"({c})*q^({e})" if e else f"({c})" for e, c in ts]
        s = " + ".join(parts)
        if self.hi is not None:
            s += f" + O(q^({self.knowledge_order()}))"
        return s

    def to_json_obj(self) -> dict:
        return {
            "denom": self.denom,
            "terms": [[k, str(self.coeffs[k])] for k in sorted(self.coeffs)],
            "hi": self.hi,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PuiseuxSeries":
        coeffs = {int(k): Fraction(c) for k, c in obj["terms"]}
        return cls(int(obj["denom"]), coeffs, obj["hi"])

    @classmethod
    def from_json(cls, text: str) -> "PuiseuxSeries":
        return cls.from_json_obj(json.loads(text))


def _coerce(x) -> PuiseuxSeries:
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, (int, Fraction)):
        return PuiseuxSeries.constant(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a series")


class ThetaSpec:
    """Parameter pair (a, p) of a theta quotient, with the prefactor
    exponent delta = p/12 - a/2 + a^2/(2p)."""

    __slots__ = ("a", "p", "delta")

    def __init__(self, a: Rat, p: Rat):
        a = Fraction(a)
        p = Fraction(p)
        if p <= 0:
            raise ValueError("p must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "delta", p / 12 - a / 2 + a * a / (2 * p))

    def __setattr__(self, name, value):
        raise AttributeError("ThetaSpec is immutable")

    def __reduce__(self):
        return (ThetaSpec, (self.a, self.p))

    def __eq__(self, other):
        return (
            isinstance(other, ThetaSpec) and self.a == other.a and self.p == other.p
        )

    def __hash__(self):
        return hash((self.a, self.p))

    def __repr__(self):
        return f"ThetaSpec(a={self.a}, p={self.p}, delta={self.delta})"


# ---------------------------------------------------------------------------
# unit inversion, exp, sqrt, rescale
# ---------------------------------------------------------------------------


def _relative_coeffs(u: PuiseuxSeries, n_rel: int) -> tuple[int, list[Fraction]]:
    """Leading grid index and dense list of the first n_rel coefficients
    relative to it."""
    alpha = min(u.coeffs)
    a = [Fraction(0)] * n_rel
    for k, c in u.coeffs.items():
        j = k - alpha
        if j < n_rel:
            a[j] = c
    return alpha, a


def _resolve_rel_length(u: PuiseuxSeries, order: Rat | None, what: str) -> int:
    """Number of relative coefficients available/requested for a unit op."""
    alpha = min(u.coeffs)
    natural = None if u.hi is None else u.hi - alpha
    if order is None:
        if natural is None:
            raise ValueError(
                f"{what} of an exact series needs an explicit truncation order"
            )
        return natural
    want = _grid_bound(order, u.denom) - alpha
    if natural is not None:
        want = min(want, natural)
    if want < 1:
        raise ValueError(f"{what}: requested order leaves no terms")
    return want


def invert_unit(u: PuiseuxSeries, order: Rat | None = None) -> PuiseuxSeries:
    """Multiplicative inverse of a series with nonzero leading coefficient.

    ``order`` (an exponent bound for u itself, not the inverse) is required
    when u is exact, since the inverse is generally an infinite series.
    """
    if not u.coeffs:
        raise ValueError("cannot invert a series that is zero to its bound")
    n_rel = _resolve_rel_length(u, order, "inversion")
    alpha, a = _relative_coeffs(u, n_rel)
    b = [Fraction(0)] * n_rel
    b[0] = 1 / a[0]
    for m in range(1, n_rel):
        s = Fraction(0)
        for j in range(1, m + 1):
            if a[j]:
                s += a[j] * b[m - j]
        b[m] = -s / a[0]
    coeffs = {m - alpha: b[m] for m in range(n_rel) if b[m]}
    return PuiseuxSeries(u.denom, coeffs, n_rel - alpha)


def exp_series(u: PuiseuxSeries, order: Rat | None = None) -> PuiseuxSeries:
    """exp of a series with strictly positive leading exponent."""
    if not u.coeffs:
        if u.hi is None:
            return PuiseuxSeries.constant(1)  # exp of the exact zero
        if u.hi <= 0:
            raise ValueError("exp needs knowledge of the constant term")
        return PuiseuxSeries(u.denom, {0: Fraction(1)}, u.hi)
    if min(u.coeffs) <= 0:
        raise ValueError("exp requires a strictly positive leading exponent")
    if u.hi is None and order is None:
        raise ValueError("exp of an exact series needs an explicit truncation order")
    hi = u.hi if order is None else _min_bound(u.hi, _grid_bound(order, u.denom))
    n = hi  # result knowledge: grid indices [0, hi)
    if n < 1:
        raise ValueError("exp target order leaves no computable terms")
    w = [Fraction(0)] * n
    for k, c in u.coeffs.items():
        if 0 < k < n:
            w[k] = c
    # f' = u' f, coefficient recurrence m*f_m = sum_j (j*w_j) f_{m-j}
    f = [Fraction(0)] * n
    f[0] = Fraction(1)
    for m in range(1, n):
        s = Fraction(0)
        for j in range(1, m + 1):
            if w[j]:
                s += j * w[j] * f[m - j]
        f[m] = s / m
    return PuiseuxSeries(u.denom, {m: f[m] for m in range(n) if f[m]}, n)


def _fraction_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    pn = math.isqrt(c.numerator)
    pd = math.isqrt(c.denominator)
    if pn * pn != c.numerator or pd * pd != c.denominator:
        return None
    return Fraction(pn, pd)


def sqrt_series(u: PuiseuxSeries, order: Rat | None = None) -> PuiseuxSeries:
    """Square root with principal leading coefficient.

    Factors out the leading monomial c*q^alpha, requires c to be the square
    of a rational, and doubles the exponent grid when alpha is odd.
    """
    if not u.coeffs:
        if u.hi is None:
            return PuiseuxSeries.zero()
        raise ValueError("sqrt of a series that is zero to its bound is undetermined")
    n_rel = _resolve_rel_length(u, order, "sqrt")
    alpha, a = _relative_coeffs(u, n_rel)
    c = a[0]
    root = _fraction_sqrt(c)
    if root is None:
        raise ValueError(f"leading coefficient {c} is not the square of a rational")
    g = [Fraction(0)] * n_rel
    g[0] = Fraction(1)
    for m in range(1, n_rel):
        s = Fraction(0)
        for j in range(1, m):
            if g[j]:
                s += g[j] * g[m - j]
        g[m] = (a[m] / c - s) / 2
    coeffs = {2 * m + alpha: root * g[m] for m in range(n_rel) if g[m]}
    return PuiseuxSeries(2 * u.denom, coeffs, 2 * n_rel + alpha)


def rescale(u: PuiseuxSeries, s: Rat) -> PuiseuxSeries:
    """Exact substitution q -> q^s for positive rational s."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("rescale factor must be positive")
    n = u.denom * s.denominator
    coeffs = {k * s.numerator: c for k, c in u.coeffs.items()}
    hi = None if u.hi is None else u.hi * s.numerator
    return PuiseuxSeries(n, coeffs, hi)


# ---------------------------------------------------------------------------
# q-series constructors
# ---------------------------------------------------------------------------


def eta_series(scale: Rat, order: Rat) -> PuiseuxSeries:
    """prod_{n>=1} (1 - q^(n*scale)) expanded below exponent ``order``.

    This is the pure product, with no fractional power of q in front.
    """
    scale = Fraction(scale)
    if scale <= 0:
        raise ValueError("eta scale must be positive")
    denom = scale.denominator
    step = scale.numerator
    hi = _grid_bound(order, denom)
    coeffs: dict[int, Fraction] = {0: Fraction(1)}
    n = 1
    while n * step < hi:
        shift = n * step
        for k in sorted(coeffs, reverse=True):
            kk = k + shift
            if kk < hi:
                coeffs[kk] = coeffs.get(kk, Fraction(0)) - coeffs[k]
                if not coeffs[kk]:
                    del coeffs[kk]
        n += 1
    return PuiseuxSeries(denom, coeffs, hi)


def theta_series(a: Rat, b: Rat, order: Rat) -> PuiseuxSeries:
    """Bilateral alternating sum over n of (-1)^n q^(a n^2 + b n), keeping
    exponents below ``order``.  Requires a > 0; exponents may be negative."""
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0:
        raise ValueError("theta_series requires a > 0")
    order = Fraction(order)
    denom = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    hi = _grid_bound(order, denom)
    coeffs: dict[int, Fraction] = {}

    def emit(n: int) -> bool:
        e = (a * n * n + b * n) * denom  # exact grid index
        k = int(e)
        if k >= hi:
            return False
        coeffs[k] = coeffs.get(k, Fraction(0)) + (1 if n % 2 == 0 else -1)
        if coeffs[k] == 0:
            del coeffs[k]
        return True

    vertex = -b / (2 * a)
    n0 = math.floor(vertex)
    n = n0
    while emit(n):
        n -= 1
    n = n0 + 1
    while emit(n):
        n += 1
    return PuiseuxSeries(denom, coeffs, hi)


def _theta_min_exponent(a: Fraction, b: Fraction) -> Fraction:
    """min over integers n of a n^2 + b n (a > 0)."""
    vertex = -b / (2 * a)
    best = None
    for n in (math.floor(vertex), math.ceil(vertex)):
        e = a * n * n + b * n
        if best is None or e < best:
            best = e
    return best


def A_series(spec: ThetaSpec, order: Rat) -> PuiseuxSeries:
    """Theta quotient q^delta * theta(p/2, p/2 - a; q) / eta(q^p), known
    below exponent ``order``."""
    order = Fraction(order)
    p = spec.p
    ta, tb = p / 2, p / 2 - spec.a
    t_lo = _theta_min_exponent(ta, tb)
    theta = theta_series(ta, tb, order - spec.delta)
    eta_inv = invert_unit(eta_series(p, order - spec.delta - t_lo))
    pref = PuiseuxSeries.monomial(1, spec.delta)
    return pref * theta * eta_inv


def A_series_product(spec: ThetaSpec, order: Rat) -> PuiseuxSeries:
    """Product form q^delta * prod_{n>=0} (1-q^(np+a))(1-q^(np+p-a)).

    Supports the finitely many non-positive product exponents that occur
    when a <= 0 or a >= p (each such factor is an exact Laurent binomial);
    requires every product exponent to be nonzero.
    """
    order = Fraction(order)
    a, p = spec.a, spec.p
    # total non-positive exponent mass shifts the product's valuation down
    total_neg = Fraction(0)
    for base in (a, p - a):
        n = 0
        while n * p + base <= 0:
            e = n * p + base
            if e == 0:
                raise ValueError("product form degenerates: a factor exponent is 0")
            total_neg += e
            n += 1
    exps: list[Fraction] = []
    for base in (a, p - a):
        n = 0
        while True:
            e = n * p + base
            if e > 0 and e >= order - total_neg:
                break
            exps.append(e)
            n += 1
    denoms = [e.denominator for e in exps] + [spec.delta.denominator]
    N = 1
    for d in denoms:
        N = N * d // gcd(N, d)
    # the accumulator's truncation is chosen so that after the negative
    # factors shift knowledge down, the result is still known below `order`
    acc = PuiseuxSeries(N, {0: Fraction(1)}, _grid_bound(order - total_neg, N))
    for e in exps:
        acc = acc * PuiseuxSeries.from_pairs([(0, 1), (e, -1)])
    return PuiseuxSeries.monomial(1, spec.delta) * acc


def theta3_series(order: Rat) -> PuiseuxSeries:
    """Non-alternating bilateral sum of q^(n^2)."""
    order = Fraction(order)
    hi = _grid_bound(order, 1)
    coeffs = {0: Fraction(1)}
    n = 1
    while n * n < hi:
        coeffs[n * n] = Fraction(2)
        n += 1
    return PuiseuxSeries(1, coeffs, hi)


def theta2_half_series(order: Rat) -> PuiseuxSeries:
    """Sum over n>=0 of q^(n^2+n): the even-weight core of the half-integer
    theta constant (which equals 2 q^(1/4) times this series)."""
    order = Fraction(order)
    hi = _grid_bound(order, 1)
    coeffs = {}
    n = 0
    while n * n + n < hi:
        coeffs[n * n + n] = Fraction(1)
        n += 1
    return PuiseuxSeries(1, coeffs, hi)


def modulus_series(order: Rat) -> PuiseuxSeries:
    """Squared elliptic modulus m(q) = k^2 as an exact q-series.

    Built from the classical theta quotient
    16 q (sum_{n>=0} q^(n^2+n))^4 / (sum_{n in Z} q^(n^2))^4,
    which has integer coefficients 16q - 128q^2 + 704q^3 - ...
    """
    order = Fraction(order)
    s2 = theta2_half_series(order)
    s3 = theta3_series(order)
    m = s2 ** 4 * invert_unit(s3 ** 4)
    return PuiseuxSeries.monomial(16, 1) * m


def nome_sqrt_exp_form(order: Rat) -> PuiseuxSeries:
    """The expansion 4 q^(1/2) exp(-4 sum_{n>=1} q^n sum_{d|n} (-1)^(d+n/d)/d),
    an alternative route to sqrt of the squared modulus."""
    order = Fraction(order)
    n_max = math.ceil(order)
    coeffs: dict[int, Fraction] = {}
    for n in range(1, n_max + 1):
        s = Fraction(0)
        for d in range(1, n + 1):
            if n % d == 0:
                s += Fraction((-1) ** (d + n // d), d)
        if s:
            coeffs[n] = -4 * s
    inner = PuiseuxSeries(1, coeffs, _grid_bound(order, 1))
    return PuiseuxSeries.monomial(4, Fraction(1, 2)) * exp_series(inner)


def h5_series(order: Rat) -> PuiseuxSeries:
    """eta(q^(1/5)) / (q^(1/5) eta(q^5)) as a Puiseux series on the 1/5 grid."""
    order = Fraction(order)
    top = eta_series(Fraction(1, 5), order + Fraction(1, 5))
    bottom = invert_unit(eta_series(5, order + Fraction(1, 5)))
    return PuiseuxSeries.monomial(1, Fraction(-1, 5)) * top * bottom


def eta5_series(order: Rat) -> PuiseuxSeries:
    """The quadratic-root combination (-1 - h5 + sqrt(5 + 2 h5 + h5^2)) / 2."""
    order = Fraction(order)
    h = h5_series(order + Fraction(2, 5))
    disc = 5 + 2 * h + h * h
    root = sqrt_series(disc)
    return (root - 1 - h) * Fraction(1, 2)
