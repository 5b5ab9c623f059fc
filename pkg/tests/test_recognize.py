"""Algebraic recognition: lattice route, rational route, certification
guards, and the divisor round-trip property."""

import random
from fractions import Fraction as F

import mpmath
import pytest
from mpmath import mp

from thetaquot.numeric import BigReal, big_real, eval_A, nome_from_r
from thetaquot.recognize import IntPoly, NotFound, recognize, recognize_rational
from thetaquot.series import ThetaSpec


def br(expr, digits, dps=None):
    with mp.workdps(dps or digits + 30):
        return BigReal(expr(), digits)


class TestIntPoly:
    def test_normalization(self):
        p = IntPoly.normalized([4, -8, 0])
        assert p.coeffs == (-1, 2)  # content 4 removed, leading made positive

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            IntPoly.normalized([0, 0])

    def test_str(self):
        assert str(IntPoly.normalized([1, -6, 1])) == "x^2 - 6*x + 1"

    def test_json(self):
        p = IntPoly.normalized([-2, 0, 0, 0, 0, 0, 1])
        assert p.to_json_obj() == ["-2", "0", "0", "0", "0", "0", "1"]
        assert IntPoly.from_json_obj(p.to_json_obj()) == p


class TestRecognize:
    def test_integer(self):
        poly = recognize(big_real(8, 60), 4)
        assert poly.coeffs == (-8, 1)

    def test_sixth_root_of_two(self):
        x = br(lambda: mpmath.root(2, 6), 80)
        assert recognize(x, 6, 80).coeffs == (-2, 0, 0, 0, 0, 0, 1)

    def test_silver_ratio_conjugate(self):
        x = br(lambda: 3 - 2 * mpmath.sqrt(2), 60)
        assert recognize(x, 4).coeffs == (1, -6, 1)

    def test_pi_not_recognized(self):
        x = br(lambda: +mpmath.pi, 60)
        with pytest.raises(NotFound):
            recognize(x, 4, 60)

    def test_diagnostic_names_precision_budget(self):
        x = br(lambda: +mpmath.pi, 40)
        with pytest.raises(NotFound, match="budget"):
            recognize(x, 6, 40)

    def test_precision_monotonicity(self):
        for digits in (80, 160):
            x = br(lambda: mpmath.root(2, 6), digits)
            assert recognize(x, 6, digits).coeffs == (-2, 0, 0, 0, 0, 0, 1)

    def test_round_trip_divisor_property(self):
        rng = random.Random(60091)
        digits = 140
        found = 0
        attempts = 0
        while found < 8 and attempts < 40:
            attempts += 1
            deg = rng.randint(2, 5)
            coeffs = [rng.randint(-1000, 1000) for _ in range(deg)] + [
                rng.randint(1, 1000)
            ]
            with mp.workdps(digits + 60):
                try:
                    roots = mpmath.polyroots(
                        list(reversed(coeffs)), maxsteps=200, extraprec=200
                    )
                except mpmath.libmp.NoConvergence:
                    continue
                real_roots = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -50]
                if not real_roots:
                    continue
                x = BigReal(mpmath.re(real_roots[0]), digits)
            got = recognize(x, 5, digits)
            found += 1
            # the recognized polynomial divides the sampled one over Q
            quotient, remainder = _divmod_poly(coeffs, list(got.coeffs))
            assert all(c == 0 for c in remainder)

    def test_degree_bound_respected(self):
        x = br(lambda: mpmath.root(2, 6), 200)
        with pytest.raises(NotFound):
            recognize(x, 3, 200)


def _divmod_poly(num, den):
    num = [F(c) for c in num]
    den = [F(c) for c in den]
    q = [F(0)] * (len(num) - len(den) + 1)
    r = num[:]
    for k in range(len(q) - 1, -1, -1):
        q[k] = r[k + len(den) - 1] / den[-1]
        for j, d in enumerate(den):
            r[k + j] -= q[k] * d
    return q, r


class TestRecognizeRational:
    def test_half(self):
        assert recognize_rational(big_real(F(1, 2), 60)) == F(1, 2)

    def test_a14_24th_power(self):
        a = eval_A(ThetaSpec(1, 4), nome_from_r(1, 80), 80) ** 24
        assert recognize_rational(big_real(a, 60), 60) == 8

    def test_a14_value_is_certified_algebraic(self):
        # the quotient value itself at r = 1 is the real eighth root of 2
        a = eval_A(ThetaSpec(1, 4), nome_from_r(1, 90), 90)
        assert recognize(big_real(a, 90), 8).coeffs == (-2, 0, 0, 0, 0, 0, 0, 0, 1)

    def test_pi_small_denominator_rejected(self):
        x = br(lambda: +mpmath.pi, 60)
        with pytest.raises(NotFound):
            recognize_rational(x, 60, den_bound=10 ** 6)

    def test_sqrt2_rejected_at_large_bound(self):
        x = br(lambda: mpmath.sqrt(2), 60)
        with pytest.raises(NotFound):
            recognize_rational(x, 60, den_bound=10 ** 9)

    def test_random_fractions_roundtrip(self):
        rng = random.Random(8844)
        for _ in range(20):
            fr = F(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
            assert recognize_rational(big_real(fr, 60)) == fr
