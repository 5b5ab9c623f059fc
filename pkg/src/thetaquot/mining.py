"""Bivariate integer relation mining between exact q-series.

Given two truncated series u(q), v(q), find an integer-coefficient
polynomial P with P(u, v) = O(q^M): build the matrix whose columns are the
coefficient vectors of the monomials u^i v^j on the common exponent grid,
compute its exact rational nullspace by fraction-free elimination, and
certify the resulting relation both on extra series orders and numerically
at high precision.  Post-validation guards against overfitting the
truncation, which interpolation-style mining invites.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .series import (
    A_series,
    PuiseuxSeries,
    ThetaSpec,
    eta5_series,
    modulus_series,
    rescale,
    sqrt_series,
)
from . import numeric
from .numeric import BigReal, eval_A, eval_eta5, nome_from_r, singular_modulus

__all__ = [
    "BivarIntPoly",
    "ABinding",
    "MinedRelation",
    "MiningError",
    "InsufficientTruncation",
    "MiningNotFound",
    "ValidationFailed",
    "build_coeff_matrix",
    "exact_nullspace",
    "mine",
    "validate",
    "build_binding_series",
    "V_BINDING_NAMES",
    "v_binding_series",
    "v_binding_numeric",
]


class MiningError(Exception):
    pass


class InsufficientTruncation(MiningError):
    def __init__(self, message: str, required_grid_order: int):
        super().__init__(message)
        self.required_grid_order = required_grid_order


class MiningNotFound(MiningError):
    def __init__(self, message: str, rank_profile: dict[int, int]):
        super().__init__(message)
        self.rank_profile = rank_profile


class ValidationFailed(MiningError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials in two variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivarIntPoly:
    """P(u, v) = sum c * u^i v^j with coprime integer coefficients and the
    lexicographically first term positive."""

    terms: tuple[tuple[int, int, int], ...]

    @classmethod
    def normalized(cls, raw: Sequence[tuple[int, int, int]]) -> "BivarIntPoly":
        agg: dict[tuple[int, int], int] = {}
        for i, j, c in raw:
            if c:
                agg[(i, j)] = agg.get((i, j), 0) + int(c)
        items = sorted((i, j, c) for (i, j), c in agg.items() if c)
        if not items:
            raise ValueError("the zero polynomial is not a valid relation")
        content = 0
        for _, _, c in items:
            content = gcd(content, abs(c))
        sign = 1 if items[0][2] > 0 else -1
        return cls(tuple((i, j, sign * c // content) for i, j, c in items))

    @property
    def total_degree(self) -> int:
        return max(i + j for i, j, _ in self.terms)

    @property
    def max_single_degree(self) -> int:
        return max(max(i, j) for i, j, _ in self.terms)

    def term_count(self) -> int:
        return len(self.terms)

    def eval_series(
        self, u_pows: Sequence[PuiseuxSeries], v_pows: Sequence[PuiseuxSeries]
    ) -> PuiseuxSeries:
        acc = PuiseuxSeries.zero()
        for i, j, c in self.terms:
            acc = acc + (u_pows[i] * v_pows[j]) * c
        return acc

    def eval_numeric(self, u: BigReal, v: BigReal) -> BigReal:
        acc = BigReal(mpmath.mpf(0), min(u.digits, v.digits))
        for i, j, c in self.terms:
            acc = acc + u ** i * v ** j * c
        return acc

    def __str__(self) -> str:
        parts = []
        for i, j, c in self.terms:
            mon = "*".join(
                ([f"u^{i}" if i > 1 else "u"] if i else [])
                + ([f"v^{j}" if j > 1 else "v"] if j else [])
            )
            if mon:
                body = f"{abs(c)}*{mon}" if abs(c) != 1 else mon
            else:
                body = str(abs(c))
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json_obj(self) -> list:
        return [[i, j, str(c)] for i, j, c in self.terms]

    @classmethod
    def from_json_obj(cls, obj) -> "BivarIntPoly":
        return cls.normalized([(int(i), int(j), int(c)) for i, j, c in obj])


# ---------------------------------------------------------------------------
# bindings: what u and v mean
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ABinding:
    """u = A(a, p; q^qscale)^power."""

    spec: ThetaSpec
    power: int
    qscale: Fraction = Fraction(1)

    def series(self, q_order: Fraction) -> PuiseuxSeries:
        inner = Fraction(q_order) / self.qscale
        base = rescale(A_series(self.spec, inner + 2), self.qscale)
        return base ** self.power

    def numeric(self, r: Fraction, digits: int) -> BigReal:
        q = nome_from_r(r, digits)
        return eval_A(self.spec, q ** self.qscale, digits) ** self.power

    def to_json_obj(self) -> dict:
        obj = {
            "a": str(self.spec.a),
            "p": str(self.spec.p),
            "power": self.power,
        }
        if self.qscale != 1:
            obj["qscale"] = str(self.qscale)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ABinding":
        return cls(
            ThetaSpec(Fraction(obj["a"]), Fraction(obj["p"])),
            int(obj["power"]),
            Fraction(obj.get("qscale", 1)),
        )


V_BINDING_NAMES = ("m", "sqrt_m", "m_q2_squared", "eta5_q4_pow5")


def v_binding_series(name: str, q_order: Fraction) -> PuiseuxSeries:
    q_order = Fraction(q_order)
    if name == "m":
        return modulus_series(q_order)
    if name == "sqrt_m":
        return sqrt_series(modulus_series(q_order + 1))
    if name == "m_q2_squared":
        return rescale(modulus_series(q_order / 2 + 1), 2) ** 2
    if name == "eta5_q4_pow5":
        return rescale(eta5_series(q_order / 4 + 1), 4) ** 5
    raise ValueError(f"unknown v binding {name!r}")


def v_binding_numeric(name: str, r: Fraction, digits: int) -> BigReal:
    if name == "m":
        return singular_modulus(r, digits).k ** 2
    if name == "sqrt_m":
        return singular_modulus(r, digits).k
    if name == "m_q2_squared":
        return singular_modulus(4 * Fraction(r), digits).k ** 4
    if name == "eta5_q4_pow5":
        q = nome_from_r(r, digits)
        return eval_eta5(q ** 4, digits) ** 5
    raise ValueError(f"unknown v binding {name!r}")


def build_binding_series(
    u_binding: ABinding, v_binding: str, q_order: Fraction
) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    return u_binding.series(Fraction(q_order)), v_binding_series(
        v_binding, Fraction(q_order)
    )


# ---------------------------------------------------------------------------
# coefficient matrix and exact nullspace
# ---------------------------------------------------------------------------


def _power_table(u: PuiseuxSeries, s: int) -> list[PuiseuxSeries]:
    pows = [PuiseuxSeries.constant(1), u]
    for _ in range(2, s + 1):
        pows.append(pows[-1] * u)
    return pows[: s + 1]


def build_coeff_matrix(
    u: PuiseuxSeries, v: PuiseuxSeries, s: int, rows: int
) -> tuple[list[list[Fraction]], list[tuple[int, int]], int, int]:
    """Matrix of coefficients of u^i v^j (0 <= i, j <= s) on the common grid.

    Returns (matrix, columns, base_index, grid_denom): one column per (i, j)
    in lexicographic order, one row per grid exponent starting at the global
    minimum ``base_index``.  Raises InsufficientTruncation when any product
    is not known through the last requested row.
    """
    u_pows = _power_table(u, s)
    v_pows = _power_table(v, s)
    cols = [(i, j) for i in range(s + 1) for j in range(s + 1)]
    products = {(i, j): u_pows[i] * v_pows[j] for i, j in cols}
    denom = 1
    for prod in products.values():
        denom = denom * prod.denom // gcd(denom, prod.denom)
    los = []
    for prod in products.values():
        if prod.coeffs:
            los.append(min(prod.coeffs) * (denom // prod.denom))
    if not los:
        raise MiningError("all monomial products vanish; nothing to interpolate")
    base = min(los)
    top = base + rows
    for (i, j), prod in products.items():
        f = denom // prod.denom
        hi = None if prod.hi is None else prod.hi * f
        if hi is not None and hi < top:
            raise InsufficientTruncation(
                f"u^{i} v^{j} is known to grid order {hi} on the 1/{denom} grid "
                f"but rows through {top} are required",
                required_grid_order=top,
            )
    matrix = []
    rebased = {}
    for key, prod in products.items():
        f = denom // prod.denom
        rebased[key] = {k * f: c for k, c in prod.coeffs.items()}
    for rix in range(rows):
        e = base + rix
        matrix.append([rebased[c].get(e, Fraction(0)) for c in cols])
    return matrix, cols, base, denom


def _int_rows(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    out = []
    for row in matrix:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) if isinstance(x, Fraction) else x * den for x in row])
    return out


_PRESCREEN_PRIME = (1 << 61) - 1


def _rank_mod_p(rows: list[list[int]], p: int = _PRESCREEN_PRIME) -> int:
    m = [[x % p for x in row] for row in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        prow = m[rank]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            if f:
                f = f * inv % p
                row = m[r]
                for cix in range(col, ncols):
                    row[cix] = (row[cix] - f * prow[cix]) % p
        rank += 1
        if rank == min(nrows, ncols):
            break
    return rank


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (matrix, pivot column list)."""
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        # pick the nonzero pivot with the smallest bit length for growth control
        best = None
        for i in range(r, nrows):
            x = m[i][col]
            if x:
                if best is None or abs(x).bit_length() < abs(m[best][col]).bit_length():
                    best = i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        piv = m[r][col]
        for i in range(r + 1, nrows):
            xi = m[i][col]
            row_i = m[i]
            row_r = m[r]
            for j in range(col, ncols):
                row_i[j] = (piv * row_i[j] - xi * row_r[j]) // prev
        pivots.append(col)
        prev = piv
        r += 1
    return m, pivots


def exact_nullspace(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    """Basis of the right kernel, each vector scaled to coprime integers
    with its first nonzero entry positive.  Exact over the rationals."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows = _int_rows(matrix)
    ech, pivots = _bareiss_echelon(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        x: list[Fraction] = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for rix in range(len(pivots) - 1, -1, -1):
            pc = pivots[rix]
            row = ech[rix]
            s = sum((row[c] * x[c] for c in range(pc + 1, ncols) if x[c]), Fraction(0))
            x[pc] = -s / row[pc]
        den = 1
        for val in x:
            den = den * val.denominator // gcd(den, val.denominator)
        ints = [int(val * den) for val in x]
        g = 0
        for val in ints:
            g = gcd(g, abs(val))
        ints = [val // g for val in ints]
        first = next(val for val in ints if val)
        if first < 0:
            ints = [-val for val in ints]
        basis.append(ints)
    return basis


def _kernel_polys(
    matrix: list[list[Fraction]],
    cols: list[tuple[int, int]],
    keep: Callable[[tuple[int, int]], bool],
) -> list[BivarIntPoly]:
    idx = [k for k, c in enumerate(cols) if keep(c)]
    if not idx:
        return []
    sub = [[row[k] for k in idx] for row in matrix]
    int_rows = _int_rows(sub)
    if _rank_mod_p(int_rows) == len(idx):
        return []  # full column rank over a prime field forces a trivial kernel
    basis = exact_nullspace(sub)
    polys = []
    for vec in basis:
        terms = [(cols[idx[k]][0], cols[idx[k]][1], vec[k]) for k in range(len(idx))]
        polys.append(BivarIntPoly.normalized(terms))
    return polys


# ---------------------------------------------------------------------------
# mined relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericCheck:
    r: Fraction
    digits: int
    residual: str


@dataclass(frozen=True)
class MinedRelation:
    poly: BivarIntPoly
    degree: int
    validated_grid_order: int
    u_binding: ABinding | None = None
    v_binding: str | None = None
    numeric_checks: tuple[NumericCheck, ...] = ()

    def to_json_obj(self) -> dict:
        return {
            "u": None if self.u_binding is None else self.u_binding.to_json_obj(),
            "v": self.v_binding,
            "poly": self.poly.to_json_obj(),
            "validated_grid_order": self.validated_grid_order,
            "numeric_checks": [
                {"r": str(c.r), "digits": c.digits, "residual": c.residual}
                for c in self.numeric_checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MinedRelation":
        poly = BivarIntPoly.from_json_obj(obj["poly"])
        return cls(
            poly=poly,
            degree=poly.max_single_degree,
            validated_grid_order=int(obj["validated_grid_order"]),
            u_binding=None if obj.get("u") is None else ABinding.from_json_obj(obj["u"]),
            v_binding=obj.get("v"),
            numeric_checks=tuple(
                NumericCheck(Fraction(c["r"]), int(c["digits"]), c["residual"])
                for c in obj.get("numeric_checks", ())
            ),
        )

    @classmethod
    def from_json(cls, text: str) -> "MinedRelation":
        return cls.from_json_obj(json.loads(text))


def _series_vanishes(
    poly: BivarIntPoly,
    u: PuiseuxSeries,
    v: PuiseuxSeries,
    through_rows: int,
) -> tuple[bool, int, int]:
    """Check P(u, v) = 0 on the first ``through_rows`` grid rows from the
    global monomial minimum.  Returns (ok, first_bad_or_checked, base)."""
    s = poly.max_single_degree
    u_pows = _power_table(u, s)
    v_pows = _power_table(v, s)
    residual = poly.eval_series(u_pows, v_pows)
    # base: the least exponent any monomial of the relation can reach
    base_exp = None
    for i, j, _ in poly.terms:
        prod = u_pows[i] * v_pows[j]
        if prod.coeffs:
            e = Fraction(min(prod.coeffs), prod.denom)
            if base_exp is None or e < base_exp:
                base_exp = e
    if base_exp is None:
        raise MiningError("relation evaluates on identically zero products")
    base = math.floor(base_exp * residual.denom)
    top = base + through_rows
    if residual.hi is not None and residual.hi < top:
        raise InsufficientTruncation(
            f"residual known to grid order {residual.hi} < required {top}",
            required_grid_order=top,
        )
    for k in sorted(residual.coeffs):
        if k < top and residual.coeffs[k]:
            return False, k - base, base
    return True, through_rows, base


def validate(
    rel: MinedRelation,
    extra_orders: int = 25,
    points: Sequence[Fraction | int] = (1, 2),
    digits: int = 60,
    u: PuiseuxSeries | None = None,
    v: PuiseuxSeries | None = None,
) -> MinedRelation:
    """Re-certify a relation on extra series rows and at numeric points.

    Series are rebuilt from the bindings when not supplied.  Raises
    ValidationFailed on the first offending order or point.
    """
    rows_needed = rel.validated_grid_order + extra_orders
    if u is None or v is None:
        if rel.u_binding is None or rel.v_binding is None:
            raise ValidationFailed("no series supplied and no bindings to rebuild from")
        q_order = Fraction(rows_needed + 10, 1)
        for _ in range(4):
            u, v = build_binding_series(rel.u_binding, rel.v_binding, q_order)
            try:
                ok, info, _ = _series_vanishes(rel.poly, u, v, rows_needed)
                break
            except InsufficientTruncation as exc:
                q_order = Fraction(exc.required_grid_order + 10, 1)
        else:
            raise ValidationFailed("could not build series long enough to validate")
    else:
        ok, info, _ = _series_vanishes(rel.poly, u, v, rows_needed)
    if not ok:
        raise ValidationFailed(
            f"series residual is nonzero {info} grid rows above the base exponent"
        )
    checks = []
    with mp.workdps(30):
        threshold = mpmath.mpf(10) ** (-Fraction(digits, 2))
    for r in points:
        r = Fraction(r)
        if rel.u_binding is not None and rel.v_binding is not None:
            uval = rel.u_binding.numeric(r, digits)
            vval = v_binding_numeric(rel.v_binding, r, digits)
        else:
            q = nome_from_r(r, digits)
            uval = numeric.real_eval_series(u, q, digits).value
            vval = numeric.real_eval_series(v, q, digits).value
        resid = abs(rel.poly.eval_numeric(uval, vval).value)
        if resid > threshold:
            raise ValidationFailed(
                f"numeric residual {mpmath.nstr(resid, 5)} at r={r} exceeds "
                f"10^(-{digits}/2)"
            )
        checks.append(NumericCheck(r, digits, mpmath.nstr(resid, 5)))
    return replace(
        rel,
        validated_grid_order=rows_needed,
        numeric_checks=tuple(checks),
    )


def _select_poly(polys: list[BivarIntPoly]) -> BivarIntPoly:
    return sorted(
        polys, key=lambda p: (p.total_degree, p.term_count(), p.terms)
    )[0]


def mine(
    u: PuiseuxSeries,
    v: PuiseuxSeries,
    s_max: int,
    M: int | None = None,
    *,
    u_binding: ABinding | None = None,
    v_binding: str | None = None,
    digits: int = 60,
    points: Sequence[Fraction | int] = (1, 2),
    extra_orders: int = 25,
) -> MinedRelation:
    """Search degrees s = 1..s_max for the first nonempty kernel, select the
    minimal relation, and validate it before returning.

    For the chosen s the kernel is refined by re-solving with the monomials
    restricted to ascending total degree, so the returned polynomial has the
    least total degree present in the kernel (then fewest terms, then
    lexicographic order as tie-breaks).
    """
    n_common = u.denom * v.denom // gcd(u.denom, v.denom)
    avail = []
    for w in (u, v):
        if w.hi is not None:
            avail.append(w.hi * (n_common // w.denom))
    if M is None:
        if not avail:
            raise MiningError("both series are exact; specify M explicitly")
        M = min(avail)
    if M < (s_max + 1) ** 2 + 25:
        raise MiningError(
            f"M={M} is below the floor (s_max+1)^2 + 25 = {(s_max + 1) ** 2 + 25}"
        )
    rank_profile: dict[int, int] = {}
    failures: list[str] = []
    for s in range(1, s_max + 1):
        rows = (s + 1) ** 2 + 10 + _valuation_spread(u, v, s)
        try:
            matrix, cols, base, denom = build_coeff_matrix(u, v, s, rows)
        except InsufficientTruncation:
            if u_binding is None or v_binding is None:
                raise
            u, v = _extend_for_rows(u_binding, v_binding, u, v, s, rows)
            matrix, cols, base, denom = build_coeff_matrix(u, v, s, rows)
        int_rows = _int_rows(matrix)
        rank = _rank_mod_p(int_rows)
        if rank == len(cols):
            rank_profile[s] = rank
            continue
        # candidate phases: smallest total degree present in the kernel
        # first (cheap restricted solve), the full kernel only as a fallback
        def restricted_candidates() -> list[BivarIntPoly]:
            for d in range(1, 2 * s + 1):
                found = _kernel_polys(matrix, cols, lambda c: c[0] + c[1] <= d)
                if found:
                    return sorted(found, key=lambda p: (p.term_count(), p.terms))
            return []

        def full_candidates() -> list[BivarIntPoly]:
            return sorted(
                _kernel_polys(matrix, cols, lambda c: True),
                key=lambda p: (p.total_degree, p.term_count(), p.terms),
            )

        tried: list[BivarIntPoly] = []
        found_any = False
        winner = None
        for phase in (restricted_candidates, full_candidates):
            for poly in phase():
                if poly in tried:
                    continue
                tried.append(poly)
                found_any = True
                rel = MinedRelation(
                    poly=poly,
                    degree=s,
                    validated_grid_order=rows,
                    u_binding=u_binding,
                    v_binding=v_binding,
                )
                try:
                    try:
                        winner = validate(
                            rel,
                            extra_orders=extra_orders,
                            points=points,
                            digits=digits,
                            u=u,
                            v=v,
                        )
                    except InsufficientTruncation:
                        if u_binding is None or v_binding is None:
                            raise
                        # supplied series were a little short of the
                        # validation span; rebuild from the bindings
                        winner = validate(
                            rel, extra_orders=extra_orders, points=points, digits=digits
                        )
                except ValidationFailed as exc:
                    # a kernel vector failing certification is an artifact
                    # of the truncation; keep looking
                    failures.append(f"s={s}: {poly} rejected ({exc})")
                    continue
                break
            if winner is not None:
                break
        if winner is not None:
            return winner
        rank_profile[s] = len(cols) - len(tried) if found_any else len(cols)
    msg = f"no certified integer relation of degree <= {s_max} through grid order {M}"
    if failures:
        msg += "; rejected candidates: " + " | ".join(failures[:4])
    raise MiningNotFound(msg, rank_profile)


def _valuation_spread(u: PuiseuxSeries, v: PuiseuxSeries, s: int) -> int:
    """Spread, in common-grid units, between the least and greatest leading
    exponents of the monomials u^i v^j with 0 <= i, j <= s.  Added to the
    row count so every column keeps a full window of informative rows."""
    n = u.denom * v.denom // gcd(u.denom, v.denom)
    try:
        vu = u.leading()[0]
        vv = v.leading()[0]
    except ValueError:
        return 0
    vals = [i * vu + j * vv for i in (0, s) for j in (0, s)]
    return int((max(vals) - min(vals)) * n)


def _extend_for_rows(
    u_binding: ABinding,
    v_binding: str,
    u: PuiseuxSeries,
    v: PuiseuxSeries,
    s: int,
    rows: int,
) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    q_order = Fraction(rows + 10)
    for _ in range(4):
        u2, v2 = build_binding_series(u_binding, v_binding, q_order)
        try:
            build_coeff_matrix(u2, v2, s, rows)
            return u2, v2
        except InsufficientTruncation as exc:
            q_order = Fraction(exc.required_grid_order + 10)
    raise MiningError("could not extend series far enough for the matrix")
