from fractions import Fraction as F
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from sphtrop import IndeterminateValuation, PuiseuxSeries
from sphtrop.series import format_series

from conftest import random_series


def mono(c, e, precision=F(32)):
    return PuiseuxSeries.monomial(c, e, precision)


t = PuiseuxSeries.t()


class TestValuation:
    def test_single_dominant_term(self):
        assert (t ** 2 + 5 * t ** 3).valuation() == 2

    def test_fractional_exponent(self):
        s = mono(3, F(-1, 2)) + t
        assert s.valuation() == F(-1, 2)
        assert s.ramification == 2

    def test_zero_to_precision_signals(self):
        with pytest.raises(IndeterminateValuation) as err:
            PuiseuxSeries.zero(F(32)).valuation()
        assert err.value.precision == 32


class TestArithmetic:
    def test_add_constants(self):
        assert (1 + t) + (1 - t) == PuiseuxSeries.constant(2)

    def test_mul_fractional_grid(self):
        a = t.scale_exponents(F(1, 2))
        b = t.scale_exponents(F(1, 3))
        p = a * b
        assert p.valuation() == F(5, 6)
        assert p.ramification == 6

    def test_full_cancellation(self):
        z = (1 + t) + (-1 - t)
        assert z.is_zero_to_precision
        assert z.precision == 32

    def test_scalar_ops_keep_precision(self):
        s = mono(1, -3)
        assert (s + 7).precision == 32
        assert (s * F(2, 3)).precision == 32

    def test_mul_precision_rule(self):
        a = mono(1, -5)  # precision 32
        b = mono(1, 2)
        assert (a * b).precision == min(32 + 2, 32 - 5)

    def test_mul_by_zero_to_precision_is_conservative(self):
        # O(t^32) * t^-5 is only known to be zero below t^27.
        unknown = PuiseuxSeries.zero(F(32))
        p = unknown * mono(1, -5)
        assert p.is_zero_to_precision
        assert p.precision == 27


class TestInvert:
    def test_geometric_series(self):
        inv = (1 - t).invert()
        assert all(inv.coefficient(k) == 1 for k in range(10))
        assert (inv * (1 - t) - 1).is_zero_to_precision

    def test_pure_monomial(self):
        assert mono(1, 3).invert() == mono(1, -3, precision=F(26))

    def test_laurent_example(self):
        a = mono(2, -1) + t
        inv = a.invert()
        assert inv.coefficient(1) == F(1, 2)
        assert inv.coefficient(3) == F(-1, 4)
        assert (a * inv - 1).is_zero_to_precision

    def test_invert_zero_to_precision_raises(self):
        with pytest.raises(IndeterminateValuation):
            PuiseuxSeries.zero().invert()

    def test_random_invert_roundtrip(self):
        rng = Random(7)
        for _ in range(200):
            m = rng.choice([1, 1, 2, 3])
            s = random_series(rng, -5, 5, ramification=m)
            assert (s * s.invert() - 1).is_zero_to_precision


class TestScaleExponents:
    def test_halving(self):
        s = t ** 2 + t ** 3
        scaled = s.scale_exponents(F(1, 2))
        assert scaled.coefficient(1) == 1
        assert scaled.coefficient(F(3, 2)) == 1
        assert scaled.precision == s.precision / 2

    def test_identity(self):
        s = mono(4, -2) + t
        assert s.scale_exponents(1) == s

    def test_collapse_to_constant(self):
        s = mono(2, 1) + mono(3, 5)
        collapsed = s.scale_exponents(0)
        assert collapsed == PuiseuxSeries.constant(5)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            t.scale_exponents(-1)

    def test_valuation_scales(self):
        rng = Random(3)
        for _ in range(50):
            s = random_series(rng)
            c = F(rng.randint(1, 9), rng.randint(1, 9))
            assert s.scale_exponents(c).valuation() == c * s.valuation()


@st.composite
def series_strategy(draw):
    m = draw(st.sampled_from([1, 1, 1, 2, 3]))
    n_terms = draw(st.integers(1, 4))
    terms = {}
    for _ in range(n_terms):
        num = draw(st.integers(-5 * m, 5 * m))
        coeff = draw(st.integers(-9, 9).filter(bool))
        terms[F(num, m)] = coeff
    s = PuiseuxSeries(terms, F(32))
    return s if s.terms else PuiseuxSeries({0: 1}, F(32))


@settings(max_examples=150, deadline=None)
@given(series_strategy(), series_strategy())
def test_valuation_of_product_adds(a, b):
    assert (a * b).valuation() == a.valuation() + b.valuation()


@settings(max_examples=150, deadline=None)
@given(series_strategy(), series_strategy())
def test_ultrametric_inequality(a, b):
    s = a + b
    bound = min(a.valuation(), b.valuation())
    if s.terms:
        assert s.valuation() >= bound
    else:
        assert s.precision >= bound
    if a.valuation() != b.valuation():
        assert s.valuation() == bound


@settings(max_examples=100, deadline=None)
@given(series_strategy(), series_strategy(), series_strategy())
def test_ring_laws_up_to_precision(a, b, c):
    assert ((a + b) * c).agrees_with(a * c + b * c)
    assert (a * b).agrees_with(b * a)


def test_format_round_trips_through_parser():
    from sphtrop import parse_series
    rng = Random(11)
    for _ in range(100):
        s = random_series(rng, ramification=rng.choice([1, 2, 3]))
        assert parse_series(format_series(s)).agrees_with(s)


def test_immutability():
    with pytest.raises(AttributeError):
        t.precision = 5
