from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxstat.qseries import (
    CapError, Caps, SeriesError, TruncatedSeries, bernoulli_number, bernoulli_poly,
    coeff, exp_classical, exp_p, format_rational, gr_product, hat_exp, hat_factorial,
    inv_pochhammer, pochhammer, q_bracket, q_factorial, q_multinomial, substitute,
)

S = TruncatedSeries
C = Caps(t=3, q=3, p=2, a=1, u=2)


def mono(caps=C, c=1, **e):
    return S.monomial(caps, c, **e)


def terms_of(caps):
    exps = st.tuples(*(st.integers(0, m) for m in caps.as_tuple()))
    coeffs = st.one_of(st.integers(-5, 5),
                       st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4)))
    return st.dictionaries(exps, coeffs, max_size=6).map(lambda d: S.from_terms(caps, d))


series = terms_of(C)
units = st.tuples(st.integers(1, 3), series).map(lambda x: x[1] - x[1].constant_term() + x[0])


class TestRing:
    def test_examples(self):
        t = mono(t=1)
        assert (1 + t) * (1 - t) == 1 - mono(t=2)
        x = mono(q=2, c=Fraction(2, 3))
        assert x + S.zero(C) == x
        assert 3 * (Fraction(1, 3) * mono(u=1)) == mono(u=1)

    @settings(max_examples=60)
    @given(series, series, series)
    def test_axioms(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x - x == S.zero(C)
        assert x * 1 == x

    @settings(max_examples=60)
    @given(units)
    def test_invert(self, x):
        assert x * x.invert() == S.one(C)

    def test_invert_examples(self):
        geo = (1 - mono(t=1)).invert()
        assert geo == S.from_terms(C, {(k, 0, 0, 0, 0): 1 for k in range(4)})
        assert S.const(C, 2).invert() == S.const(C, Fraction(1, 2))
        caps = Caps(p=6)
        inv = q_factorial(2, caps).invert()
        assert inv == S.from_terms(caps, {(0, 0, k, 0, 0): (-1) ** k for k in range(7)})
        with pytest.raises(SeriesError):
            mono(t=1).invert()

    def test_caps_must_match(self):
        with pytest.raises(CapError):
            S.one(C) + S.one(Caps())

    def test_truncation_drops_high_terms(self):
        x = mono(t=2) * mono(t=2)
        assert x.is_zero()

    def test_power(self):
        x = 1 + mono(q=1)
        assert x ** 3 == 1 + mono(q=1, c=3) + mono(q=2, c=3) + mono(q=3)
        assert (x ** -2) * x ** 2 == S.one(C)


class TestShiftRecap:
    def test_shift(self):
        x = 1 + mono(t=1)
        assert x.shift(q=1, u=2) == mono(q=1, u=2) + mono(t=1, q=1, u=2)
        assert x.shift(t=3) == mono(t=3)
        with pytest.raises(SeriesError):
            x.shift(t=-1)

    def test_unshift(self):
        x = mono(t=1, q=2) + mono(t=2)
        assert x.unshift(t=1) == mono(q=2) + mono(t=1)
        with pytest.raises(SeriesError):
            x.unshift(q=1)

    def test_recap_and_truncate(self):
        x = 1 + mono(t=3) + mono(q=1)
        small = Caps(t=1, q=3, p=2, a=1, u=2)
        assert x.truncate(small) == S.from_terms(small, {(0,) * 5: 1, (0, 1, 0, 0, 0): 1})
        assert x.truncate(small).recap(C) == 1 + mono(q=1)


class TestSubstitute:
    def test_q_squared(self):
        caps = Caps(q=6)
        x = S.from_terms(caps, {(0, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0): 1, (0, 3, 0, 0, 0): 1})
        y = substitute(x, {"q": {"q": 2}})
        assert y.terms() == {(0, 0, 0, 0, 0): 1, (0, 2, 0, 0, 0): 1, (0, 6, 0, 0, 0): 1}

    def test_a_to_q(self):
        caps = Caps(q=2, p=2, a=2)
        x = 1 + S.monomial(caps, a=1, p=1)
        assert substitute(x, {"a": {"q": 1}}) == 1 + S.monomial(caps, q=1, p=1)

    def test_u_by_series(self):
        caps = Caps(q=2, u=2)
        image = (1 + S.monomial(caps, q=1)).shift(u=1)
        y = substitute(S.monomial(caps, u=2), {"u": image})
        assert y == (1 + S.monomial(caps, q=1)) ** 2 * S.monomial(caps, u=2)

    def test_simultaneous(self):
        # q <- q^2 and a <- q must not feed into each other
        caps = Caps(q=4, a=1)
        x = S.monomial(caps, a=1) + S.monomial(caps, q=1)
        assert substitute(x, {"q": {"q": 2}, "a": {"q": 1}}) == \
            S.monomial(caps, q=1) + S.monomial(caps, q=2)


class TestPochhammer:
    def test_examples(self):
        caps = Caps(t=2, q=2, p=3, a=2)
        a = S.monomial(caps, a=1)
        assert pochhammer(a, "p", 0) == S.one(caps)
        t = S.monomial(caps, t=1)
        assert pochhammer(t, "q", 2) == 1 - t - t.shift(q=1) + t.shift(t=1, q=1)
        ap = a.shift(p=1)
        assert pochhammer(-ap, "p", 2) == (1 + ap) * (1 + ap.shift(p=1))
        assert inv_pochhammer(t, "q", 2) * pochhammer(t, "q", 2) == S.one(caps)

    def test_brackets(self):
        caps = Caps(p=4, a=1)
        assert q_bracket(3, caps) == S.from_terms(caps, {(0, 0, k, 0, 0): 1 for k in range(3)})
        assert hat_factorial(1, caps) == 1 + S.monomial(caps, a=1, p=1)
        assert q_multinomial((1, 1), caps) == 1 + S.monomial(caps, p=1)

    def test_multinomial_cap_error(self):
        with pytest.raises(CapError):
            q_multinomial((2, 2), Caps(p=3))

    def test_gaussian_binomial(self):
        caps = Caps(p=4)
        expected = {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
        assert q_multinomial((2, 2), caps).terms() == \
            {(0, 0, k, 0, 0): v for k, v in expected.items()}


class TestExponentials:
    def test_exp_p(self):
        caps = Caps(p=5, u=2)
        e = exp_p(S.monomial(caps, u=1))
        assert coeff(e, "u", 0) == S.one(caps.with_(u=0))
        c2 = coeff(e, "u", 2)
        assert c2 * (1 + S.monomial(c2.caps, p=1)) == S.one(c2.caps)

    def test_exp_p_at_p_cap_zero(self):
        caps = Caps(q=4, u=4)
        e = exp_p(S.monomial(caps, q=1, u=1))
        assert e.terms() == {(0, m, 0, 0, m): 1 for m in range(5)}

    def test_hat_exp(self):
        caps = Caps(p=4, a=4, u=3)
        ap = S.monomial(caps, a=1, p=1)
        e = hat_exp(S.monomial(caps, u=1), -ap)
        c1 = coeff(e, "u", 1)
        assert c1 * (1 + S.monomial(c1.caps, a=1, p=1)) == S.one(c1.caps)
        assert coeff(e, "u", 0) == S.one(caps.with_(u=0))
        # base a gives denominators (a;p)_m [m]_p!
        a = S.monomial(caps, a=1)
        c2 = coeff(hat_exp(S.monomial(caps, u=1), a), "u", 2)
        den = (pochhammer(a, "p", 2) * q_factorial(2, caps)).truncate(c2.caps)
        assert c2 * den == S.one(c2.caps)

    def test_classical(self):
        caps = Caps(u=4)
        e = exp_classical(S.monomial(caps, u=1))
        assert [e[(0, 0, 0, 0, m)] for m in range(5)] == [1, 1, Fraction(1, 2),
                                                          Fraction(1, 6), Fraction(1, 24)]

    def test_argument_needs_u(self):
        with pytest.raises(SeriesError):
            exp_p(S.one(Caps(u=2)))

    def test_coeff(self):
        caps = Caps(u=2)
        x = S.from_terms(caps, {(0, 0, 0, 0, 0): 1, (0, 0, 0, 0, 1): 3, (0, 0, 0, 0, 2): 1})
        assert coeff(x, "u", 1) == S.const(caps.with_(u=0), 3)
        assert coeff((1 - mono(t=1)).invert(), "t", 0) == S.one(C.with_(t=0))
        with pytest.raises(CapError):
            coeff(x, "u", 3)


class TestGrProduct:
    def test_low_orders(self):
        caps = Caps(q=2, p=3, u=1)
        g = gr_product(caps)
        assert coeff(g, "u", 0) == S.one(caps.with_(u=0))
        assert coeff(g, "u", 1).terms() == {(0, j, i, 0, 0): 1 for i in range(4) for j in range(3)}

    def test_four_factors(self):
        caps = Caps(q=1, p=1, u=2)
        expected = S.one(caps)
        for e in ({}, {"p": 1}, {"q": 1}, {"p": 1, "q": 1}):
            x = S.monomial(caps, u=1, **e)
            expected = expected * (1 + x + x * x)
        assert gr_product(caps) == expected


class TestBernoulli:
    def test_numbers(self):
        assert bernoulli_number(0) == 1
        assert bernoulli_number(1) == Fraction(-1, 2)
        assert bernoulli_number(2) == Fraction(1, 6)
        assert bernoulli_number(3) == 0
        assert bernoulli_number(12) == Fraction(-691, 2730)

    def test_poly(self):
        assert bernoulli_poly(2, 3) == Fraction(37, 6)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_power_sums(self, n):
        # sum_{j<m} j^n = (B_{n+1}(m) - B_{n+1}) / (n+1)
        for m in range(1, 6):
            lhs = sum(j ** n for j in range(m))
            assert lhs == (bernoulli_poly(n + 1, m) - bernoulli_number(n + 1)) / (n + 1)


class TestSerialization:
    @given(series)
    def test_json_roundtrip(self, x):
        assert S.from_json(json.loads(x.json_dumps())) == x

    def test_text(self):
        x = 2 + mono(t=1, q=2, c=Fraction(-1, 3))
        assert x.to_text() == "2/1 * t^0 q^0 p^0 a^0 u^0\n-1/3 * t^1 q^2 p^0 a^0 u^0"
        assert format_rational(Fraction(4, 2)) == "2/1"

    def test_pretty(self):
        x = 1 + 2 * mono(t=1) + mono(t=2)
        assert x.pretty() == "1 + 2t + t^2"
        assert S.zero(C).pretty() == "0"

    def test_first_difference_is_lexicographic(self):
        x = mono(t=1) + mono(q=2)
        y = S.zero(C)
        assert x.first_difference(y) == ((0, 2, 0, 0, 0), 1, 0)
        assert x.first_difference(x) is None
