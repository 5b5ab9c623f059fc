"""Exact series ring: constructors against independent oracles, operation
contracts, and ring properties on seeded random inputs."""

import random
from fractions import Fraction as F

import pytest

from thetaquot.series import (
    A_series,
    A_series_product,
    PuiseuxSeries,
    ThetaSpec,
    eta5_series,
    eta_series,
    exp_series,
    h5_series,
    invert_unit,
    modulus_series,
    nome_sqrt_exp_form,
    rescale,
    sqrt_series,
    theta_series,
)


def series(pairs, order=None):
    return PuiseuxSeries.from_pairs(pairs, order)


def pentagonal_eta(scale, order):
    """Independent oracle: the alternating sum over generalized pentagonal
    numbers, sum_k (-1)^k q^(scale * k(3k-1)/2)."""
    scale = F(scale)
    out = {}
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            e = scale * kk * (3 * kk - 1) / 2
            if e < order:
                out[e] = out.get(e, F(0)) + F((-1) ** (kk % 2))
                hit = True
        if not hit:
            break
        k += 1
    return series(out.items(), order)


def brute_theta(a, b, order):
    """Independent oracle: direct bilateral summation over a wide window."""
    a, b = F(a), F(b)
    out = {}
    for n in range(-60, 61):
        e = a * n * n + b * n
        if e < order:
            out[e] = out.get(e, F(0)) + F((-1) ** (n % 2))
    return series(((e, c) for e, c in out.items() if c), order)


def long_division(num_pairs, den_pairs, n_terms):
    """Independent oracle: long division of integer-exponent polynomials,
    returning the first n_terms quotient coefficients from exponent 0."""
    num = dict(num_pairs)
    den = dict(den_pairs)
    lead = den[0]
    q = {}
    for m in range(n_terms):
        acc = num.get(m, F(0))
        for j in range(1, m + 1):
            if j in den and (m - j) in q:
                acc -= den[j] * q[m - j]
        q[m] = acc / lead
    return q


class TestRingOps:
    def test_difference_of_squares(self):
        lhs = series([(0, 1), (1, 1)]) * series([(0, 1), (1, -1)])
        assert lhs == series([(0, 1), (2, -1)])

    def test_half_grid_product_normalizes(self):
        h = PuiseuxSeries.monomial(1, F(1, 2))
        prod = h * h
        assert prod.denom == 1
        assert prod == PuiseuxSeries.monomial(1, 1)

    def test_eta_times_inverse_is_one(self):
        e = eta_series(1, 40)
        prod = e * invert_unit(e)
        assert prod.terms() == [(F(0), F(1))]
        assert prod.knowledge_order() == 40

    def test_truncation_is_min_of_bounds(self):
        a = series([(0, 1), (1, 1)], order=5)
        b = series([(0, 1)], order=3)
        assert (a + b).knowledge_order() == 3

    def test_product_bound_respects_valuations(self):
        # q^2 * (series known to 5) is known to 7
        a = PuiseuxSeries.monomial(1, 2)
        b = series([(0, 1), (1, -1)], order=5)
        assert (a * b).knowledge_order() == 7

    def test_ring_axioms_random(self):
        rng = random.Random(20240)
        for _ in range(25):
            def rnd():
                n = rng.choice([1, 2, 3])
                pairs = [
                    (F(rng.randint(-3, 6), n), F(rng.randint(-4, 4)))
                    for _ in range(rng.randint(1, 5))
                ]
                return series(pairs, order=rng.randint(4, 9))

            a, b, c = rnd(), rnd(), rnd()
            assert ((a + b) + c).agrees_with(a + (b + c))
            assert (a * (b + c)).agrees_with(a * b + a * c)
            assert (a * b).agrees_with(b * a)
            assert ((a * b) * c).agrees_with(a * (b * c))

    def test_negative_power_of_unit(self):
        u = series([(0, 2), (1, 1)], order=8)
        assert (u ** -2).agrees_with(invert_unit(u) ** 2)

    def test_negative_power_of_non_unit_raises(self):
        with pytest.raises(ValueError):
            series([], order=5) ** -1


class TestInvertUnit:
    def test_geometric_series(self):
        inv = invert_unit(series([(0, 1), (1, -1)]), order=8)
        assert inv.terms() == [(F(k), F(1)) for k in range(8)]

    def test_monomial(self):
        inv = invert_unit(PuiseuxSeries.monomial(2, 1), order=4)
        assert inv.leading() == (F(-1), F(1, 2))

    def test_eta4_inverse_against_long_division(self):
        # oracle: long division of 1 by the pentagonal expansion of the
        # scale-4 product, on the q^4 lattice
        order = 41
        inv = invert_unit(eta_series(4, order))
        pent = pentagonal_eta(4, order)
        den = {int(e): c for e, c in pent.terms()}
        q = long_division({0: F(1)}, den, order)
        expect = series(((m, c) for m, c in q.items() if c), order)
        assert inv.agrees_with(expect, through=order - 1)
        assert inv.coefficient(0) == 1
        assert inv.coefficient(4) == 1
        assert inv.coefficient(8) == 2

    def test_zero_series_rejected(self):
        with pytest.raises(ValueError):
            invert_unit(series([], order=5))

    def test_random_units_multiply_to_one(self):
        rng = random.Random(7177)
        for _ in range(20):
            pairs = [(0, F(rng.randint(1, 9)))] + [
                (k, F(rng.randint(-5, 5))) for k in range(1, rng.randint(2, 7))
            ]
            u = series(pairs, order=12)
            prod = u * invert_unit(u)
            assert prod.terms() == [(F(0), F(1))]


class TestExpSeries:
    def test_exponential_coefficients(self):
        e = exp_series(PuiseuxSeries.monomial(1, 1), order=5)
        assert e.terms() == [
            (F(0), F(1)),
            (F(1), F(1)),
            (F(2), F(1, 2)),
            (F(3), F(1, 6)),
            (F(4), F(1, 24)),
        ]

    def test_exp_of_zero(self):
        assert exp_series(PuiseuxSeries.zero(), order=6) == PuiseuxSeries.constant(1)

    def test_constant_term_rejected(self):
        with pytest.raises(ValueError):
            exp_series(series([(0, 1), (1, 1)], order=5))

    def test_exp_is_a_homomorphism(self):
        rng = random.Random(515)
        for _ in range(10):
            u = series(
                [(k, F(rng.randint(-3, 3))) for k in range(1, 5)], order=10
            )
            v = series(
                [(k, F(rng.randint(-3, 3))) for k in range(1, 5)], order=10
            )
            lhs = exp_series(u + v)
            rhs = exp_series(u) * exp_series(v)
            assert lhs.agrees_with(rhs)


class TestSqrtSeries:
    def test_perfect_square(self):
        s = sqrt_series(series([(0, 1), (1, 2), (2, 1)]), order=6)
        assert s.agrees_with(series([(0, 1), (1, 1)]), through=5)

    def test_monomial(self):
        s = sqrt_series(PuiseuxSeries.monomial(16, 1), order=4)
        assert s.leading() == (F(1, 2), F(4))

    def test_non_square_leading_coefficient_rejected(self):
        with pytest.raises(ValueError):
            sqrt_series(series([(0, 2), (1, 1)], order=5))

    def test_square_roundtrip_random(self):
        rng = random.Random(99)
        for _ in range(12):
            c = F(rng.choice([1, 4, 9, 25]), rng.choice([1, 4]))
            pairs = [(0, c)] + [
                (k, F(rng.randint(-4, 4))) for k in range(1, 6)
            ]
            u = series(pairs, order=10)
            s = sqrt_series(u)
            assert (s * s).agrees_with(u)

    def test_modulus_sqrt_leading_term(self):
        s = sqrt_series(modulus_series(10))
        assert s.leading() == (F(1, 2), F(4))


class TestRescale:
    def test_simple(self):
        assert rescale(series([(0, 1), (1, -1)]), 2) == series([(0, 1), (2, -1)])

    def test_theta_family(self):
        assert rescale(theta_series(2, 1, 20), F(1, 2)).agrees_with(
            theta_series(1, F(1, 2), 10)
        )

    def test_theta_family_random(self):
        rng = random.Random(31337)
        for _ in range(10):
            a = F(rng.randint(1, 5), rng.choice([1, 2]))
            b = F(rng.randint(-5, 5), rng.choice([1, 2, 3]))
            s = F(rng.randint(1, 4), rng.choice([1, 2]))
            lhs = rescale(theta_series(a, b, 12), s)
            rhs = theta_series(a * s, b * s, 12 * s)
            assert lhs.agrees_with(rhs)

    def test_modulus_rescale_leading(self):
        m2 = rescale(modulus_series(8), 2)
        assert m2.leading() == (F(2), F(16))


class TestEtaSeries:
    def test_pentagonal_oracle(self):
        assert eta_series(1, 40).agrees_with(pentagonal_eta(1, 40))

    def test_scale_four_matches_rescale(self):
        assert eta_series(4, 60) == rescale(eta_series(1, 15), 4)

    def test_truncation_below_first_term(self):
        e = eta_series(4, 3)
        assert e.terms() == [(F(0), F(1))]

    def test_fractional_scale(self):
        e = eta_series(F(1, 5), 2)
        assert e.agrees_with(rescale(pentagonal_eta(1, 10), F(1, 5)))
        assert e.coefficient(F(1, 5)) == -1
        assert e.coefficient(F(2, 5)) == -1
        assert e.coefficient(F(3, 5)) == 0  # -q^(3/5) cancels q^(1/5) q^(2/5)


class TestThetaSeries:
    def test_theta_2_1_oracle(self):
        t = theta_series(2, 1, 20)
        assert t.agrees_with(brute_theta(2, 1, 20))
        assert t.terms()[:5] == [
            (F(0), F(1)),
            (F(1), F(-1)),
            (F(3), F(-1)),
            (F(6), F(1)),
            (F(10), F(1)),
        ]

    def test_negative_lowest_exponent(self):
        t = theta_series(3, -5, 10)
        assert t.leading() == (F(-2), F(-1))
        assert t.agrees_with(brute_theta(3, -5, 10))

    def test_symmetry_in_b(self):
        rng = random.Random(4242)
        for _ in range(12):
            a = F(rng.randint(1, 6), rng.choice([1, 2]))
            b = F(rng.randint(-7, 7), rng.choice([1, 2, 3]))
            assert theta_series(a, b, 15) == theta_series(a, -b, 15)

    def test_nonpositive_a_rejected(self):
        with pytest.raises(ValueError):
            theta_series(0, 1, 10)
        with pytest.raises(ValueError):
            theta_series(-2, 1, 10)

    def test_cancelling_case_is_zero(self):
        # exponents collide in pairs with opposite signs when -b/a is 1
        assert theta_series(1, 1, 25).is_zero()


JTP_SPECS = [
    ThetaSpec(1, 4),
    ThetaSpec(1, 3),
    ThetaSpec(-1, 6),
    ThetaSpec(-2, 8),
    ThetaSpec(1, 5),
    ThetaSpec(F(1, 2), 4),
    ThetaSpec(F(1, 2), 2),
]


class TestASeries:
    def test_a14_leading_and_product_form(self):
        a = A_series(ThetaSpec(1, 4), 12)
        assert a.leading() == (F(-1, 24), F(1))
        # odd-exponent product oracle: q^(-1/24) (1-q)(1-q^3)(1-q^5)...
        prod = PuiseuxSeries.constant(1).truncate(13)
        for e in range(1, 13, 2):
            prod = prod * series([(0, 1), (e, -1)])
        prod = PuiseuxSeries.monomial(1, F(-1, 24)) * prod
        assert a.agrees_with(prod)

    def test_a86_leading_exponent(self):
        a = A_series(ThetaSpec(8, 6), 6)
        assert a.leading() == (F(-1, 6), F(-1))

    def test_a_half_4_grid(self):
        spec = ThetaSpec(F(1, 2), 4)
        assert spec.delta == F(11, 96)
        a = A_series(spec, 4)
        assert 96 % a.denom == 0
        assert a.leading() == (F(11, 96), F(1))

    @pytest.mark.parametrize("spec", JTP_SPECS, ids=lambda s: f"a{s.a}_p{s.p}")
    def test_product_form_matches_theta_eta_form(self, spec):
        via_theta = A_series(spec, 26)
        via_product = A_series_product(spec, 26)
        assert via_theta.agrees_with(via_product)
        grid_known = min(via_theta.hi, via_product.hi * via_theta.denom // via_product.denom)
        assert grid_known >= 200

    def test_delta_recomputed_matches(self):
        spec = ThetaSpec(F(1, 2), 4)
        assert spec.delta == spec.p / 12 - spec.a / 2 + spec.a ** 2 / (2 * spec.p)

    def test_nonpositive_p_rejected(self):
        with pytest.raises(ValueError):
            ThetaSpec(1, 0)


class TestModulusSeries:
    def test_leading_term(self):
        assert modulus_series(5).leading() == (F(1), F(16))

    def test_classical_eta_quotient_oracle(self):
        # oracle: 16 q prod ((1+q^(2n)) / (1+q^(2n-1)))^8 expanded directly
        order = 24
        num = PuiseuxSeries.constant(1).truncate(order)
        den = PuiseuxSeries.constant(1).truncate(order)
        for n in range(1, order + 1):
            if 2 * n < order:
                num = num * series([(0, 1), (2 * n, 1)])
            if 2 * n - 1 < order:
                den = den * series([(0, 1), (2 * n - 1, 1)])
        oracle = PuiseuxSeries.monomial(16, 1) * num ** 8 * invert_unit(den ** 8)
        assert modulus_series(order).agrees_with(oracle)

    def test_first_coefficients(self):
        m = modulus_series(6)
        assert [m.coefficient(k) for k in (1, 2, 3)] == [16, -128, 704]

    def test_exp_form_agreement(self):
        lhs = sqrt_series(modulus_series(30))
        rhs = nome_sqrt_exp_form(30)
        assert lhs.agrees_with(rhs)


class TestH5Eta5:
    def test_h5_leading(self):
        h = h5_series(4)
        assert h.leading() == (F(-1, 5), F(1))

    def test_eta5_quadratic_contract(self):
        h = h5_series(5)
        e = eta5_series(5)
        resid = e * e + (1 + h) * e - 1
        assert resid.is_zero()
        assert resid.knowledge_order() >= 4

    def test_eta5_rescale_power_is_integral(self):
        v = rescale(eta5_series(6), 4) ** 5
        assert v.denom == 1
        assert v.leading() == (F(4), F(1))

    def test_eta5_leading(self):
        assert eta5_series(3).leading() == (F(1, 5), F(1))


class TestSerialization:
    def test_json_roundtrip(self):
        a = A_series(ThetaSpec(1, 4), 8)
        assert PuiseuxSeries.from_json(a.to_json()) == a

    def test_json_shape(self):
        obj = series([(F(-1, 2), 3), (1, F(2, 7))], order=4).to_json_obj()
        assert set(obj) == {"denom", "terms", "hi"}
        assert obj["denom"] == 2
        assert obj["terms"] == [[-1, "3"], [2, "2/7"]]
        assert obj["hi"] == 8
