from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skeingram.exact_algebra import (
    A,
    DELTA,
    DeltaPoly,
    LaurentPoly,
    RationalFunc,
    delta,
    delta_closed_form,
    delta_in_delta_var,
    laurent_arithmetic,
    laurent_to_delta,
    rational_reduce,
    step_ratio,
    theta_edge,
)

laurents = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=4).map(LaurentPoly)
nonzero_laurents = laurents.filter(bool)


def L(terms):
    return LaurentPoly(terms)


class TestLaurentPoly:
    def test_cancellation(self):
        assert laurent_arithmetic(L({2: 1}), L({2: -1}), "add") == LaurentPoly(0)
        assert LaurentPoly(0).terms == {}

    def test_difference_of_squares(self):
        got = laurent_arithmetic(L({1: 1, -1: 1}), L({1: 1, -1: -1}), "mul")
        assert got == L({2: 1, -2: -1})

    def test_delta_squared(self):
        assert laurent_arithmetic(DELTA, DELTA, "mul") == L({4: 1, 0: 2, -4: 1})

    def test_unknown_operation(self):
        with pytest.raises(ValueError):
            laurent_arithmetic(A, A, "div")

    def test_zero_coefficients_dropped(self):
        assert L({3: 0, 1: 2}).terms == {1: 2}

    def test_text_rendering(self):
        assert str(L({3: 2, -1: -1})) == "-A^-1 + 2*A^3"
        assert str(L({0: 5, 2: -1})) == "5 - A^2"
        assert str(delta(2)) == "A^-4 + 1 + A^4"
        assert str(LaurentPoly(0)) == "0"

    def test_json_round_trip(self):
        x = L({-3: 7, 5: -(10**30)})
        data = x.to_json()
        assert data == {"var": "A", "terms": [[-3, "7"], [5, str(-(10**30))]]}
        assert LaurentPoly.from_json(data) == x

    def test_evaluate_exactly(self):
        assert DELTA.evaluate(Fraction(3, 2)) == Fraction(-97, 36)

    def test_negative_power_of_monomial(self):
        assert (A**-3) * (A**3) == LaurentPoly(1)
        with pytest.raises(ValueError):
            DELTA**-1

    @given(laurents, laurents, laurents)
    def test_ring_axioms(self, x, y, z):
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z
        assert (x - y) + y == x

    @given(laurents, nonzero_laurents)
    def test_exact_division_inverts_multiplication(self, x, y):
        assert (x * y).exact_div(y) == x

    @given(laurents)
    def test_bar_is_involution(self, x):
        assert x.bar().bar() == x


class TestRationalFunc:
    def test_reduces_by_polynomial_gcd(self):
        r = rational_reduce(L({4: 1, -4: -1}), L({2: 1, -2: -1}))
        assert r.num == L({2: 1, -2: 1}) and r.den == LaurentPoly(1)

    def test_reduces_content(self):
        r = rational_reduce(L({1: 2}), 2)
        assert r.num == A and r.den == LaurentPoly(1)

    def test_normalises_sign(self):
        r = rational_reduce(L({2: 1}), -1)
        assert r.num == L({2: -1}) and r.den == LaurentPoly(1)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError, match="division by zero polynomial"):
            rational_reduce(A, 0)

    def test_denominator_is_normalised(self):
        r = RationalFunc(1, DELTA)
        assert r.den.low == 0 and r.den.terms[0] > 0

    @given(laurents, nonzero_laurents, nonzero_laurents)
    def test_equal_fractions_have_identical_form(self, x, y, z):
        r, s = RationalFunc(x, y), RationalFunc(x * z, y * z)
        assert r == s and hash(r) == hash(s)
        assert (r.num, r.den) == (s.num, s.den)

    @given(laurents, nonzero_laurents, laurents, nonzero_laurents)
    def test_equality_agrees_with_cross_multiplication(self, a, b, c, d):
        r, s = RationalFunc(a, b), RationalFunc(c, d)
        assert (r == s) == (a * d == b * c)
        assert r.cross_equal(s) == (r == s)

    @given(laurents, nonzero_laurents, laurents, nonzero_laurents)
    def test_field_operations(self, a, b, c, d):
        r, s = RationalFunc(a, b), RationalFunc(c, d)
        assert (r + s) - s == r
        if s:
            assert (r * s) / s == r

    def test_json_round_trip(self):
        r = RationalFunc(delta(3), delta(2))
        assert RationalFunc.from_json(r.to_json()) == r


class TestQuantumIntegers:
    def test_small_values(self):
        assert delta(-1) == LaurentPoly(0)
        assert delta(0) == LaurentPoly(1)
        assert delta(1) == L({2: -1, -2: -1})
        assert delta(2) == L({4: 1, 0: 1, -4: 1})

    def test_domain(self):
        with pytest.raises(ValueError):
            delta(-2)
        with pytest.raises(ValueError):
            delta_in_delta_var(-2)

    @pytest.mark.parametrize("n", range(0, 31))
    def test_recurrence_matches_closed_form(self, n):
        assert RationalFunc(delta(n)) == delta_closed_form(n)

    @pytest.mark.parametrize("n", range(0, 31))
    def test_invariant_under_inversion(self, n):
        assert delta(n).bar() == delta(n)

    def test_in_delta_variable(self):
        d = DeltaPoly({1: 1})
        assert delta_in_delta_var(1) == d
        assert delta_in_delta_var(2) == d * d - 1
        assert delta_in_delta_var(3) == d * d * d - d * 2
        assert str(delta_in_delta_var(3)) == "-2*delta^1 + delta^3"

    @pytest.mark.parametrize("n", range(-1, 31))
    def test_delta_variable_substitution(self, n):
        assert delta_in_delta_var(n).to_laurent() == delta(n)

    @pytest.mark.parametrize("n", range(0, 20))
    def test_laurent_to_delta_inverts_substitution(self, n):
        assert laurent_to_delta(delta(n)) == delta_in_delta_var(n)

    def test_laurent_to_delta_rejects_asymmetric(self):
        assert laurent_to_delta(A**2) is None
        assert laurent_to_delta(L({1: 1, -1: 1})) is None


class TestThetaAndRatios:
    def test_theta_edge(self):
        assert theta_edge(1, 0) == delta(1)
        assert theta_edge(1, 2) == delta(2)
        assert theta_edge(2, 1) == delta(2)

    def test_step_ratio(self):
        assert step_ratio(1, 2) == RationalFunc(1)
        assert step_ratio(1, 0) == RationalFunc(L({2: -1, -2: -1}))
        assert step_ratio(2, 1) == RationalFunc(delta(2), delta(1))

    @pytest.mark.parametrize("args", [(1, 1), (0, 2), (-1, 0)])
    def test_non_adjacent(self, args):
        with pytest.raises(ValueError):
            theta_edge(*args)
        with pytest.raises(ValueError):
            step_ratio(*args)
